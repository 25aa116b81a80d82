import { parse } from "csv-parse/sync";

/** One estimate row from the engine's CSV output. */
export interface EstimateRow {
  experiment: string;
  lambda: number;
  n: number;
  quantity: string;
  value: number;
  stderr: number;
  nSamples: number;
  seed: number;
  params: Record<string, unknown>;
}

export const EXPECTED_COLUMNS = [
  "experiment",
  "lambda",
  "n",
  "quantity",
  "value",
  "stderr",
  "n_samples",
  "seed",
  "params_json",
] as const;

function toNumber(raw: string, column: string, line: number): number {
  // the engine writes Python float reprs; inf/nan included
  if (raw === "inf") return Infinity;
  if (raw === "-inf") return -Infinity;
  if (raw === "nan") return NaN;
  const v = Number(raw);
  if (raw.trim() === "" || Number.isNaN(v)) {
    throw new Error(
      `line ${line}: column "${column}" is not a number (got "${raw}")`,
    );
  }
  return v;
}

/**
 * Parse engine CSV text into typed rows.
 *
 * Validates the header against the fixed schema first so a wrong or
 * reordered file fails with a message naming the offending columns.
 */
export function parseRecords(text: string): EstimateRow[] {
  const table: string[][] = parse(text, {
    skip_empty_lines: true,
    relax_column_count: true,
  });
  if (table.length === 0) {
    throw new Error("empty CSV: no header line");
  }
  const header = table[0];
  const missing = EXPECTED_COLUMNS.filter((c) => !header.includes(c));
  const extra = header.filter(
    (c) => !(EXPECTED_COLUMNS as readonly string[]).includes(c),
  );
  if (missing.length > 0 || extra.length > 0) {
    const parts = [];
    if (missing.length > 0) parts.push(`missing columns: ${missing.join(", ")}`);
    if (extra.length > 0) parts.push(`unexpected columns: ${extra.join(", ")}`);
    throw new Error(`CSV header does not match the engine schema (${parts.join("; ")})`);
  }
  // column order is part of the schema, not just the column set
  const swapped = EXPECTED_COLUMNS.findIndex((c, i) => header[i] !== c);
  if (swapped >= 0) {
    throw new Error(
      `CSV header does not match the engine schema (column ${swapped + 1} ` +
        `should be "${EXPECTED_COLUMNS[swapped]}", got "${header[swapped]}")`,
    );
  }
  const idx = Object.fromEntries(header.map((c, i) => [c, i]));

  return table.slice(1).map((cells, k) => {
    const line = k + 2;
    if (cells.length !== header.length) {
      throw new Error(
        `line ${line}: expected ${header.length} fields, got ${cells.length}`,
      );
    }
    let params: Record<string, unknown>;
    try {
      params = JSON.parse(cells[idx.params_json] || "{}");
    } catch {
      throw new Error(`line ${line}: params_json is not valid JSON`);
    }
    return {
      experiment: cells[idx.experiment],
      lambda: toNumber(cells[idx.lambda], "lambda", line),
      n: toNumber(cells[idx.n], "n", line),
      quantity: cells[idx.quantity],
      value: toNumber(cells[idx.value], "value", line),
      stderr: toNumber(cells[idx.stderr], "stderr", line),
      nSamples: toNumber(cells[idx.n_samples], "n_samples", line),
      seed: toNumber(cells[idx.seed], "seed", line),
      params,
    };
  });
}

/** Rows of one quantity, sorted by scale n. */
export function selectQuantity(rows: EstimateRow[], quantity: string): EstimateRow[] {
  return rows
    .filter((r) => r.quantity === quantity)
    .sort((a, b) => a.n - b.n);
}
