/**
 * Readers for the two solver CSV schemas. Headers are pinned bit-exactly;
 * anything else is rejected so a schema drift upstream fails loudly here.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface ConvergenceRow {
  method: string;
  h: number;
  error: number; // NaN marks a diverged run
}

export interface ObservablesRow {
  t: number;
  norm: number;
  momentum: number;
  energy: number;
  energy_linear: number;
}

export const CONVERGENCE_HEADER = ["method", "h", "error"];
export const OBSERVABLES_HEADER = ["t", "norm", "momentum", "energy", "energy_linear"];

function parseChecked(path: string, expectedHeader: string[]): string[][] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new Error(`malformed CSV ${path}: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0 || rows[0].join(",") !== expectedHeader.join(",")) {
    throw new Error(
      `unexpected header in ${path}: got "${rows[0]?.join(",")}", ` +
        `expected "${expectedHeader.join(",")}"`,
    );
  }
  for (const [i, row] of rows.entries()) {
    if (row.length !== expectedHeader.length) {
      throw new Error(`row ${i} of ${path} has ${row.length} fields`);
    }
  }
  return rows.slice(1);
}

export function readConvergenceCsv(path: string): ConvergenceRow[] {
  return parseChecked(path, CONVERGENCE_HEADER).map((row) => ({
    method: row[0],
    h: Number(row[1]),
    error: Number(row[2]),
  }));
}

export function readObservablesCsv(path: string): ObservablesRow[] {
  return parseChecked(path, OBSERVABLES_HEADER).map((row) => ({
    t: Number(row[0]),
    norm: Number(row[1]),
    momentum: Number(row[2]),
    energy: Number(row[3]),
    energy_linear: Number(row[4]),
  }));
}
