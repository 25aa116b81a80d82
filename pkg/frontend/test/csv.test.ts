import { describe, expect, it } from "vitest";
import { parseRecords, selectQuantity } from "../src/csv.js";

const HEADER = "experiment,lambda,n,quantity,value,stderr,n_samples,seed,params_json";

function row(over: Partial<Record<string, string>> = {}): string {
  const base: Record<string, string> = {
    experiment: "width-dist",
    lambda: "0.45",
    n: "16.0",
    quantity: "vacant_width_q50",
    value: "0.8",
    stderr: "0.01",
    n_samples: "1000",
    seed: "0",
    params_json: '"{""which"": ""vacant""}"',
  };
  Object.assign(base, over);
  return HEADER.split(",")
    .map((c) => base[c])
    .join(",");
}

describe("parseRecords", () => {
  it("reads a well-formed file", () => {
    const rows = parseRecords([HEADER, row(), row({ n: "32.0" })].join("\n") + "\n");
    expect(rows).toHaveLength(2);
    expect(rows[0].lambda).toBe(0.45);
    expect(rows[0].n).toBe(16);
    expect(rows[0].params.which).toBe("vacant");
    expect(rows[1].n).toBe(32);
  });

  it("names missing and unexpected header columns", () => {
    const bad = "experiment,lambda,n,quantity,value,stderr,count,seed,params_json";
    expect(() => parseRecords(bad + "\n" + row())).toThrowError(
      /missing columns: n_samples.*unexpected columns: count/s,
    );
  });

  it("rejects a reordered header", () => {
    const cols = HEADER.split(",");
    [cols[0], cols[1]] = [cols[1], cols[0]];
    expect(() => parseRecords(cols.join(",") + "\n")).toThrowError(/schema/);
  });

  it("maps inf and nan spellings onto IEEE values", () => {
    const rows = parseRecords(
      [HEADER, row({ value: "inf" }), row({ value: "nan", stderr: "-inf" })].join("\n"),
    );
    expect(rows[0].value).toBe(Infinity);
    expect(Number.isNaN(rows[1].value)).toBe(true);
    expect(rows[1].stderr).toBe(-Infinity);
  });

  it("points at the line with broken params_json", () => {
    const text = [HEADER, row(), row({ params_json: '"{oops"' })].join("\n");
    expect(() => parseRecords(text)).toThrowError(/line 3/);
  });

  it("rejects a short row", () => {
    expect(() => parseRecords(HEADER + "\nwidth-dist,0.45,16.0\n")).toThrowError();
  });

  it("rejects an empty file", () => {
    expect(() => parseRecords("")).toThrowError(/empty/i);
  });
});

describe("selectQuantity", () => {
  it("filters and sorts by box size", () => {
    const text = [
      HEADER,
      row({ n: "64.0" }),
      row({ n: "8.0" }),
      row({ quantity: "vacant_width_q90", n: "4.0" }),
      row({ n: "16.0" }),
    ].join("\n");
    const picked = selectQuantity(parseRecords(text), "vacant_width_q50");
    expect(picked.map((r) => r.n)).toEqual([8, 16, 64]);
  });
});
