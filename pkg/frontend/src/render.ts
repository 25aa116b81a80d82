import { EstimateRow, selectQuantity } from "./csv.js";
import { fitPowerLaw } from "./fit.js";

const W = 640;
const H = 440;
const MARGIN = { left: 64, right: 24, top: 40, bottom: 48 };
const PALETTE = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2"];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (hi === lo) {
    hi += 0.5;
    lo -= 0.5;
  }
  const f = ((v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  const step = Math.pow(10, Math.floor(Math.log10((hi - lo) / 4)));
  const mult = (hi - lo) / step > 8 ? 2 : 1;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / (step * mult)) * step * mult; t <= hi + 1e-12; t += step * mult) {
    ticks.push(Number(t.toPrecision(12)));
  }
  f.ticks = ticks;
  return f;
}

function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const la = Math.log(lo);
  const lb = Math.log(hi);
  const lin = linearScale(la, lb === la ? la + 1 : lb, outLo, outHi);
  const f = ((v: number) => lin(Math.log(v))) as Scale;
  // ticks at powers of 2 inside the range, the natural ladder for box sizes
  const ticks: number[] = [];
  for (let p = Math.ceil(Math.log2(lo) - 1e-9); Math.pow(2, p) <= hi * (1 + 1e-9); p++) {
    ticks.push(Math.pow(2, p));
  }
  f.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  return f;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(0);
  return String(Number(v.toPrecision(4)));
}

function frame(
  sx: Scale,
  sy: Scale,
  xLabel: string,
  yLabel: string,
  title: string,
): string {
  const x0 = MARGIN.left;
  const x1 = W - MARGIN.right;
  const y0 = H - MARGIN.bottom;
  const y1 = MARGIN.top;
  const parts = [
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#444"/>`,
    `<text x="${W / 2}" y="20" text-anchor="middle" font-size="15" font-weight="bold">${esc(title)}</text>`,
    `<text x="${(x0 + x1) / 2}" y="${H - 10}" text-anchor="middle" font-size="12">${esc(xLabel)}</text>`,
    `<text x="16" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 ${(y0 + y1) / 2})">${esc(yLabel)}</text>`,
  ];
  for (const t of sx.ticks) {
    const px = sx(t);
    if (px < x0 - 0.5 || px > x1 + 0.5) continue;
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#444"/>`);
    parts.push(`<text x="${px}" y="${y0 + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`);
  }
  for (const t of sy.ticks) {
    const py = sy(t);
    if (py < y1 - 0.5 || py > y0 + 0.5) continue;
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#444"/>`);
    parts.push(`<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">${fmt(t)}</text>`);
  }
  return parts.join("\n");
}

function document(body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" ` +
    `viewBox="0 0 ${W} ${H}" font-family="sans-serif">\n` +
    `<rect width="${W}" height="${H}" fill="white"/>\n${body}\n</svg>\n`
  );
}

/**
 * Log-log scaling figure for one quantity: measured points, the OLS
 * power-law fit, and the fitted slope annotated with its stderr.
 */
export function scalingFigure(rows: EstimateRow[], quantity: string): string {
  const pts = selectQuantity(rows, quantity).filter(
    (r) => r.n > 0 && r.value > 0 && Number.isFinite(r.value),
  );
  if (pts.length < 2) {
    throw new Error(
      `scaling figure needs 2 positive rows of quantity "${quantity}", got ${pts.length}`,
    );
  }
  const fit = fitPowerLaw(pts);
  const xs = pts.map((p) => p.n);
  const ys = pts.map((p) => p.value);
  const sx = logScale(Math.min(...xs), Math.max(...xs), MARGIN.left, W - MARGIN.right);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const sy = logScale(yLo / 1.3, yHi * 1.3, H - MARGIN.bottom, MARGIN.top);
  sy.ticks = ys.map((v) => Number(v.toPrecision(2)));

  const marks: string[] = [];
  // fitted line across the data span
  const lineY = (n: number) => Math.exp(fit.intercept + fit.slope * Math.log(n));
  marks.push(
    `<line x1="${sx(xs[0])}" y1="${sy(lineY(xs[0]))}" x2="${sx(xs[xs.length - 1])}" ` +
      `y2="${sy(lineY(xs[xs.length - 1]))}" stroke="${PALETTE[1]}" stroke-width="1.5" stroke-dasharray="6 3"/>`,
  );
  for (const p of pts) {
    const cx = sx(p.n);
    if (p.stderr > 0 && p.value - p.stderr > 0) {
      marks.push(
        `<line x1="${cx}" y1="${sy(p.value - p.stderr)}" x2="${cx}" y2="${sy(p.value + p.stderr)}" stroke="${PALETTE[0]}"/>`,
      );
    }
    marks.push(`<circle cx="${cx}" cy="${sy(p.value)}" r="4" fill="${PALETTE[0]}"/>`);
  }
  const label = `slope = ${fit.slope.toFixed(3)} ± ${fit.slopeStderr.toFixed(3)}`;
  marks.push(
    `<text x="${W - MARGIN.right - 10}" y="${MARGIN.top + 20}" text-anchor="end" ` +
      `font-size="14" fill="${PALETTE[1]}">${esc(label)}</text>`,
  );
  return document(
    frame(sx, sy, "box size n (log)", `${quantity} (log)`, `Scaling of ${quantity}`) +
      "\n" +
      marks.join("\n"),
  );
}

/**
 * Crossing-probability curves: one polyline per box size, probability
 * against intensity, the raw material of the critical-point estimate.
 */
export function curvesFigure(rows: EstimateRow[]): string {
  const cross = rows.filter(
    (r) => r.quantity === "cross_prob" && Number.isFinite(r.value),
  );
  if (cross.length === 0) {
    throw new Error('curves figure needs rows of quantity "cross_prob"');
  }
  const byN = new Map<number, EstimateRow[]>();
  for (const r of cross) {
    if (!byN.has(r.n)) byN.set(r.n, []);
    byN.get(r.n)!.push(r);
  }
  const lams = cross.map((r) => r.lambda);
  const sx = linearScale(Math.min(...lams), Math.max(...lams), MARGIN.left, W - MARGIN.right);
  const sy = linearScale(0, 1, H - MARGIN.bottom, MARGIN.top);

  const marks: string[] = [];
  const sizes = [...byN.keys()].sort((a, b) => a - b);
  sizes.forEach((n, k) => {
    const color = PALETTE[k % PALETTE.length];
    const curve = byN.get(n)!.sort((a, b) => a.lambda - b.lambda);
    const path = curve.map((r) => `${sx(r.lambda)},${sy(r.value)}`).join(" ");
    marks.push(`<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.5"/>`);
    for (const r of curve) {
      if (r.stderr > 0) {
        marks.push(
          `<line x1="${sx(r.lambda)}" y1="${sy(Math.max(0, r.value - r.stderr))}" ` +
            `x2="${sx(r.lambda)}" y2="${sy(Math.min(1, r.value + r.stderr))}" stroke="${color}"/>`,
        );
      }
      marks.push(`<circle cx="${sx(r.lambda)}" cy="${sy(r.value)}" r="3" fill="${color}"/>`);
    }
    marks.push(
      `<text x="${W - MARGIN.right - 10}" y="${MARGIN.top + 20 + 16 * k}" text-anchor="end" ` +
        `font-size="12" fill="${color}">n = ${n}</text>`,
    );
  });
  return document(
    frame(sx, sy, "intensity", "crossing probability", "Box-crossing curves") +
      "\n" +
      marks.join("\n"),
  );
}
