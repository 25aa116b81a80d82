import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { parseRecords } from "../src/csv.js";
import { curvesFigure, scalingFigure } from "../src/render.js";

const HEADER = "experiment,lambda,n,quantity,value,stderr,n_samples,seed,params_json";

function syntheticScalingCsv(exponent: number): string {
  const lines = [HEADER];
  for (const n of [8, 16, 32, 64, 128]) {
    const v = 3.2 * Math.pow(n, exponent);
    lines.push(
      `width-dist,0.45,${n}.0,vacant_width_q50,${v},${v * 0.01},1000,0,"{""which"": ""vacant""}"`,
    );
  }
  return lines.join("\n") + "\n";
}

describe("scalingFigure", () => {
  it("annotates the slope of a known power law to 0.01", () => {
    const rows = parseRecords(syntheticScalingCsv(-0.5));
    const svg = scalingFigure(rows, "vacant_width_q50");
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
    const m = svg.match(/slope = (-?\d+\.\d+) ± (\d+\.\d+)/);
    expect(m).not.toBeNull();
    expect(Math.abs(Number(m![1]) - -0.5)).toBeLessThanOrEqual(0.01);
  });

  it("draws one marker per scale", () => {
    const svg = scalingFigure(parseRecords(syntheticScalingCsv(-1)), "vacant_width_q50");
    expect(svg.match(/<circle /g)).toHaveLength(5);
  });

  it("refuses a quantity that is not in the file", () => {
    const rows = parseRecords(syntheticScalingCsv(-0.5));
    expect(() => scalingFigure(rows, "occupied_width_q50")).toThrowError(/occupied_width_q50/);
  });
});

describe("curvesFigure", () => {
  const fixture = new URL("../fixtures/cross_prob.csv", import.meta.url);

  it("renders engine cross-prob output without error", () => {
    const rows = parseRecords(readFileSync(fixture, "utf8"));
    const svg = curvesFigure(rows);
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
    expect(svg).toContain("<polyline");
    expect(svg).toContain("crossing probability");
  });

  it("draws one curve and one legend entry per box size", () => {
    const rows = parseRecords(readFileSync(fixture, "utf8"));
    const sizes = new Set(rows.filter((r) => r.quantity === "cross_prob").map((r) => r.n));
    const svg = curvesFigure(rows);
    expect(svg.match(/<polyline /g)).toHaveLength(sizes.size);
    for (const n of sizes) {
      expect(svg).toContain(`n = ${n}`);
    }
  });

  it("refuses input with no crossing rows", () => {
    const rows = parseRecords(syntheticScalingCsv(-0.5));
    expect(() => curvesFigure(rows)).toThrowError(/cross_prob/);
  });
});
