import { readFileSync } from "fs";

/** Exact column schemas written by the simulation harness. */
export const EVOLVE_COLUMNS = [
  "t",
  "rho11",
  "rho22",
  "re_rho12",
  "im_rho12",
  "abs_rho12",
  "abs_f_pred_gauss",
  "abs_f_pred_exp",
  "leakage_alpha2",
] as const;

export const SWEEP_COLUMNS = [
  "epsilon",
  "seed",
  "tau_d_measured",
  "tau_d_reason",
  "tau_e_measured",
  "tau_e_reason",
  "tau_d_gauss_theory",
  "tau_d_exp_theory",
  "tau_e_fgr_theory",
  "epsilon_p",
] as const;

export class SchemaError extends Error {}

export interface Table {
  path: string;
  columns: string[];
  rows: string[][];
}

export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: empty CSV`);
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  for (const row of rows) {
    if (row.length !== columns.length) {
      throw new SchemaError(
        `${path}: row has ${row.length} fields, header has ${columns.length}`,
      );
    }
  }
  return { path, columns, rows };
}

/** The harness schemas are exact: same names, same order, nothing extra. */
export function requireColumns(table: Table, expected: readonly string[]): void {
  for (let i = 0; i < expected.length; i++) {
    if (table.columns[i] !== expected[i]) {
      const found = table.columns[i] ?? "<nothing>";
      throw new SchemaError(
        `${table.path}: expected column '${expected[i]}' at position ${i}, found '${found}'`,
      );
    }
  }
  if (table.columns.length !== expected.length) {
    throw new SchemaError(
      `${table.path}: unexpected extra column '${table.columns[expected.length]}'`,
    );
  }
  if (table.rows.length === 0) {
    throw new SchemaError(`${table.path}: no data rows`);
  }
}

function columnIndex(table: Table, name: string): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`${table.path}: missing column '${name}'`);
  }
  return idx;
}

export function numberColumn(table: Table, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row, r) => {
    const value = Number(row[idx]);
    if (row[idx] === "" || Number.isNaN(value)) {
      throw new SchemaError(`${table.path}: row ${r + 1}: '${name}' is not a number (${row[idx]})`);
    }
    return value;
  });
}

/** Numeric column where an empty field means "absent" (reason-coded elsewhere). */
export function optionalNumberColumn(table: Table, name: string): (number | null)[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row, r) => {
    if (row[idx] === "") return null;
    const value = Number(row[idx]);
    if (Number.isNaN(value)) {
      throw new SchemaError(`${table.path}: row ${r + 1}: '${name}' is not a number (${row[idx]})`);
    }
    return value;
  });
}

export function stringColumn(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx]);
}
