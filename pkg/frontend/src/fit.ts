/** Ordinary least squares on (x, y) pairs. */
export interface Fit {
  slope: number;
  intercept: number;
  slopeStderr: number;
}

export function ols(x: number[], y: number[]): Fit {
  if (x.length !== y.length || x.length < 2) {
    throw new Error(`need at least 2 paired points, got ${x.length}/${y.length}`);
  }
  const m = x.length;
  const mx = x.reduce((a, b) => a + b, 0) / m;
  const my = y.reduce((a, b) => a + b, 0) / m;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < m; i++) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx === 0) throw new Error("all x values identical: slope undefined");
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  let rss = 0;
  for (let i = 0; i < m; i++) {
    const e = y[i] - (intercept + slope * x[i]);
    rss += e * e;
  }
  // residual-based slope error; zero for a 2-point (exact) fit
  const slopeStderr = m > 2 ? Math.sqrt(rss / (m - 2) / sxx) : 0;
  return { slope, intercept, slopeStderr };
}

/** Log-log fit of value against n; points must be strictly positive. */
export function fitPowerLaw(points: Array<{ n: number; value: number }>): Fit {
  const usable = points.filter((p) => p.n > 0 && p.value > 0);
  if (usable.length < 2) {
    throw new Error(
      `power-law fit needs 2 positive points, got ${usable.length} of ${points.length}`,
    );
  }
  return ols(
    usable.map((p) => Math.log(p.n)),
    usable.map((p) => Math.log(p.value)),
  );
}
