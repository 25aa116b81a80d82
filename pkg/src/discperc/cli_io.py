"""Command-line front end: experiments in, CSV out.

Output schema (normative, bit-exact column order):
    experiment,lambda,n,quantity,value,stderr,n_samples,seed,params_json
Each run also writes `<output>.manifest.json` with the config echo, the
package version, and the wall time; the CSV itself contains nothing
nondeterministic, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .arms import alpha_n, estimate_pi4, russo_check
from .crossing_engine import CrossingQuery, bottleneck_radius, occupied_crossing, vacant_crossing
from .experiments import (EstimateRecord, characteristic_length,
                          coupling_identity_check, crossing_probability,
                          estimate_lambda_c, fkg_check,
                          near_critical_window_check, width_distribution)
from .sampler import Rect, sample_for_query, sample_poisson, square

CSV_COLUMNS = ("experiment", "lambda", "n", "quantity", "value", "stderr",
               "n_samples", "seed", "params_json")

SUBCOMMANDS = ("sample", "cross-prob", "width-dist", "pi4", "alpha",
               "lambda-c", "char-length", "window-check", "coupling-check",
               "verify", "bench")


@dataclass
class ExperimentConfig:
    """Flat, serializable description of one CLI invocation."""

    command: str
    lam: float | None = None
    lambda_grid: list[float] | None = None
    n_values: list[float] = field(default_factory=list)
    samples: int = 1000
    master_seed: int = 0
    margin: float = 4.0
    pitch: float | None = None
    threads: int = 0
    output_path: str | None = None
    pi4_method: str = "pivotal"
    which: str = "vacant"
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.command not in SUBCOMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.margin < 0:
            raise ValueError("margin must be nonnegative")
        if self.pitch is not None and self.pitch <= 0:
            raise ValueError("pitch must be positive")
        if self.threads < 0:
            raise ValueError("threads must be >= 0")
        if self.lam is not None and self.lam < 0:
            raise ValueError("lambda must be nonnegative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(**d)

    @property
    def worker_count(self) -> int:
        return self.threads if self.threads > 0 else 1


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_records(records: list[EstimateRecord], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([r.experiment, _fmt(float(r.lam)), _fmt(float(r.n)),
                    r.quantity, _fmt(float(r.value)), _fmt(float(r.stderr)),
                    r.n_samples, r.seed, r.params_json()])


def _emit(records: list[EstimateRecord], config: ExperimentConfig,
          t0: float) -> None:
    buf = io.StringIO()
    write_records(records, buf)
    data = buf.getvalue()
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        manifest = {"config": config.to_dict(), "version": __version__,
                    "wall_time_s": time.time() - t0}
        with open(config.output_path + ".manifest.json", "w",
                  encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        sys.stdout.write(data)


def _lambdas(config: ExperimentConfig) -> list[float]:
    if config.lambda_grid:
        return [float(v) for v in config.lambda_grid]
    if config.lam is None:
        raise ValueError("this command needs --lambda or --lambda-grid")
    return [float(config.lam)]


def run(config: ExperimentConfig) -> int:
    """Execute one configured experiment; 0 on success."""
    t0 = time.time()
    cmd = config.command
    seed = config.master_seed

    if cmd == "sample":
        lam = _lambdas(config)[0]
        n = float(config.n_values[0])
        s = sample_poisson(square(n), lam, seed)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y"])
        for cx, cy in s.centers:
            w.writerow([repr(float(cx)), repr(float(cy))])
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8",
                      newline="") as fh:
                fh.write(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
        return 0

    records: list[EstimateRecord] = []

    if cmd == "cross-prob":
        m_over_n = float(config.extra.get("aspect", 1.0))
        for lam in _lambdas(config):
            for n in config.n_values:
                n = float(n)
                rect = Rect(-m_over_n * n, m_over_n * n, -n, n)
                records.append(crossing_probability(
                    lam, rect, orientation=config.extra.get(
                        "orientation", "horizontal"),
                    samples=config.samples, seed=seed,
                    threads=config.worker_count, margin=config.margin))
    elif cmd == "width-dist":
        for lam in _lambdas(config):
            for n in config.n_values:
                sweep = width_distribution(
                    lam, float(n), which=config.which,
                    samples=config.samples, seed=seed, h=config.pitch,
                    margin=config.margin, threads=config.worker_count)
                records.extend(sweep.records)
    elif cmd in ("pi4", "alpha"):
        lam = _lambdas(config)[0]
        for n in config.n_values:
            n = float(n)
            est = estimate_pi4(lam, n, config.samples,
                               method=config.pi4_method, seed=seed)
            records.append(EstimateRecord(
                experiment="pi4", lam=lam, n=n, quantity="pi4",
                value=est.value, stderr=est.stderr,
                n_samples=est.n_samples, seed=seed,
                params={"method": est.method}))
            if cmd == "alpha":
                records.append(EstimateRecord(
                    experiment="alpha", lam=lam, n=n, quantity="alpha_n",
                    value=alpha_n(est, n),
                    stderr=est.stderr / max(est.value, 1e-300) ** 2 / n ** 2
                    if est.value > 0 else math.inf,
                    n_samples=est.n_samples, seed=seed,
                    params={"method": est.method}))
    elif cmd == "lambda-c":
        records.append(estimate_lambda_c(
            [float(v) for v in config.n_values], samples=config.samples,
            seed=seed, threads=config.worker_count))
    elif cmd == "char-length":
        lam = _lambdas(config)[0]
        records.append(characteristic_length(
            lam, delta=float(config.extra.get("delta", 0.25)),
            n_max=float(config.extra.get("n_max", 256.0)),
            samples=config.samples, seed=seed))
    elif cmd == "window-check":
        kwargs = {}
        if "lambda_c" in config.extra:
            kwargs["lambda_c"] = float(config.extra["lambda_c"])
        if "alpha" in config.extra:
            kwargs["alpha"] = float(config.extra["alpha"])
        if "C_grid" in config.extra:
            kwargs["C_grid"] = [float(v) for v in config.extra["C_grid"]]
        for n in config.n_values:
            sweep = near_critical_window_check(
                float(n), samples=config.samples, seed=seed, **kwargs)
            records.extend(sweep.records)
    elif cmd == "coupling-check":
        lam = _lambdas(config)[0]
        a = float(config.extra.get("a", 0.2))
        for n in config.n_values:
            n = float(n)
            p1, p2, z = coupling_identity_check(lam, a, n,
                                                samples=config.samples,
                                                seed=seed)
            params = {"a": a, "p1": p1, "p2": p2}
            for qty, val in (("coupling_p1", p1), ("coupling_p2", p2),
                             ("coupling_z", z)):
                records.append(EstimateRecord(
                    experiment="coupling-check", lam=lam, n=n, quantity=qty,
                    value=val, stderr=0.0, n_samples=config.samples,
                    seed=seed, params=params))
    elif cmd == "verify":
        return _verify(config)
    elif cmd == "bench":
        lam = _lambdas(config)[0]
        n = float(config.n_values[0]) if config.n_values else 256.0
        sq = square(n)
        times = []
        query = CrossingQuery(sq, "horizontal", 1.0)
        for i in range(config.samples):
            t1 = time.perf_counter()
            s = sample_for_query(sq, lam, seed, index=i, margin=config.margin)
            occupied_crossing(s, query)
            times.append(time.perf_counter() - t1)
        med = sorted(times)[len(times) // 2]
        rate = 1.0 / med if med > 0 else math.inf
        print(f"n={n} lambda={lam}: median {med * 1e3:.2f} ms/sample, "
              f"{rate:.0f} samples/s")
        records.append(EstimateRecord(
            experiment="bench", lam=lam, n=n, quantity="samples_per_second",
            value=rate, stderr=0.0, n_samples=config.samples, seed=seed,
            params={"median_ms": med * 1e3}))

    _emit(records, config, t0)
    return 0


def _verify(config: ExperimentConfig) -> int:
    """Fast cross-module consistency suite; nonzero exit on any failure."""
    seed = config.master_seed
    failures = []

    def check(name: str, ok: bool, detail: str) -> None:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        if not ok:
            failures.append(name)

    sq = square(8.0)
    bad = 0
    for i in range(1000):
        s = sample_for_query(sq, 0.36, seed, index=i, margin=4.0)
        occ = occupied_crossing(s, CrossingQuery(sq, "horizontal", 1.0))
        vac = vacant_crossing(s, sq, "vertical")
        bad += (occ == vac)
    check("duality", bad == 0, f"{bad}/1000 XOR violations")

    flips = 0
    for i in range(200):
        s = sample_for_query(sq, 0.3, seed, index=i, margin=4.0)
        res = bottleneck_radius(s, sq, "horizontal")
        if not math.isfinite(res.r_star) or res.censored:
            continue
        lo = occupied_crossing(s, CrossingQuery(sq, "horizontal",
                                                res.r_star * (1 - 1e-9)))
        hi = occupied_crossing(s, CrossingQuery(sq, "horizontal",
                                                res.r_star * (1 + 1e-9)))
        flips += (not lo) and hi
    check("bottleneck", flips > 0, f"{flips} clean flips")

    p1, p2, z = coupling_identity_check(0.36, 0.2, 16.0, samples=2000,
                                        seed=seed)
    check("coupling", z < 3, f"p1={p1:.4f} p2={p2:.4f} z={z:.2f}")

    lhs, rhs, z = russo_check(0.36, 8.0, 0.01, 5000, seed=seed)
    check("russo", z < 3, f"lhs={lhs:.2f} rhs={rhs:.2f} z={z:.2f}")

    z = fkg_check(0.36, 8.0, samples=20000, seed=seed)
    check("fkg", z > -3, f"z={z:+.2f}")

    return 1 if failures else 0


def _parse_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _read_config_file(path: str) -> dict:
    """Flat key = value file; values parse as JSON when possible."""
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.rstrip()}")
            key, val = (part.strip() for part in line.split("=", 1))
            try:
                out[key] = json.loads(val)
            except json.JSONDecodeError:
                out[key] = val
    return out


def build_config(argv: list[str]) -> ExperimentConfig:
    parser = argparse.ArgumentParser(
        prog="discperc",
        description="Monte Carlo experiments on the planar disc model")
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--lambda-grid", dest="lambda_grid",
                        type=_parse_list)
    parser.add_argument("--n", dest="n_values", type=_parse_list)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--seed", dest="master_seed", type=int)
    parser.add_argument("--margin", type=float)
    parser.add_argument("--pitch", type=float)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--output", dest="output_path")
    parser.add_argument("--method", dest="pi4_method",
                        choices=("pivotal", "annulus"))
    parser.add_argument("--which", choices=("occupied", "vacant"))
    parser.add_argument("--a", type=float, help="enlargement half-width")
    parser.add_argument("--delta", type=float)
    parser.add_argument("--n-max", dest="n_max", type=float)
    parser.add_argument("--aspect", type=float,
                        help="rect half-width / half-height for cross-prob")
    parser.add_argument("--orientation",
                        choices=("horizontal", "vertical"))
    parser.add_argument("--lambda-c", dest="lambda_c", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--C-grid", dest="C_grid", type=_parse_list)
    args = parser.parse_args(argv)

    values: dict = {}
    if args.config:
        values.update(_read_config_file(args.config))
    direct = {"lam", "lambda_grid", "n_values", "samples", "master_seed",
              "margin", "pitch", "threads", "output_path", "pi4_method",
              "which"}
    extra_keys = {"a", "delta", "n_max", "aspect", "orientation", "lambda_c",
                  "alpha", "C_grid"}
    for key, val in vars(args).items():
        if val is None or key in ("command", "config"):
            continue
        if key in direct:
            values[key] = val
        elif key in extra_keys:
            values.setdefault("extra", {})
            values["extra"][key] = val
    # config files may state extra keys at top level
    file_extra = {k: values.pop(k) for k in list(values)
                  if k in extra_keys}
    if file_extra:
        values.setdefault("extra", {})
        for k, v in file_extra.items():
            values["extra"].setdefault(k, v)
    if "n_values" in values and not isinstance(values["n_values"], list):
        values["n_values"] = [float(values["n_values"])]
    return ExperimentConfig(command=args.command, **values)


def main(argv: list[str] | None = None) -> int:
    try:
        config = build_config(sys.argv[1:] if argv is None else argv)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
