import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";
import {
  EVOLVE_COLUMNS,
  SWEEP_COLUMNS,
  SchemaError,
  numberColumn,
  optionalNumberColumn,
  readCsv,
  requireColumns,
} from "../src/csv";

const FIXTURES = join(__dirname, "fixtures");

function tempCsv(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const path = join(dir, "data.csv");
  writeFileSync(path, content);
  return path;
}

describe("readCsv", () => {
  it("reads the harness evolve output", () => {
    const table = readCsv(join(FIXTURES, "evolve.csv"));
    expect(table.columns).toEqual([...EVOLVE_COLUMNS]);
    expect(table.rows.length).toBeGreaterThan(100);
  });

  it("rejects an empty file", () => {
    expect(() => readCsv(tempCsv(""))).toThrow(SchemaError);
  });

  it("rejects ragged rows", () => {
    expect(() => readCsv(tempCsv("a,b\n1,2,3\n"))).toThrow(/fields/);
  });
});

describe("requireColumns", () => {
  it("accepts the exact sweep schema", () => {
    const table = readCsv(join(FIXTURES, "sweep.csv"));
    expect(() => requireColumns(table, SWEEP_COLUMNS)).not.toThrow();
  });

  it("names the missing column", () => {
    const table = readCsv(tempCsv("t,rho11,rho22\n0,1,0\n"));
    expect(() => requireColumns(table, EVOLVE_COLUMNS)).toThrow(/re_rho12/);
  });

  it("rejects reordered columns", () => {
    const header = [...EVOLVE_COLUMNS].reverse().join(",");
    const row = EVOLVE_COLUMNS.map(() => "0").join(",");
    const table = readCsv(tempCsv(`${header}\n${row}\n`));
    expect(() => requireColumns(table, EVOLVE_COLUMNS)).toThrow(SchemaError);
  });

  it("rejects extra trailing columns", () => {
    const header = [...EVOLVE_COLUMNS, "extra"].join(",");
    const row = [...EVOLVE_COLUMNS, "x"].map(() => "0").join(",");
    const table = readCsv(tempCsv(`${header}\n${row}\n`));
    expect(() => requireColumns(table, EVOLVE_COLUMNS)).toThrow(/extra/);
  });

  it("rejects a header-only file", () => {
    const table = readCsv(tempCsv(`${[...EVOLVE_COLUMNS].join(",")}\n`));
    expect(() => requireColumns(table, EVOLVE_COLUMNS)).toThrow(/no data rows/);
  });
});

describe("column parsing", () => {
  it("parses numbers strictly", () => {
    const table = readCsv(tempCsv("a,b\n1.5,x\n"));
    expect(numberColumn(table, "a")).toEqual([1.5]);
    expect(() => numberColumn(table, "b")).toThrow(/not a number/);
  });

  it("treats empty fields as absent in optional columns", () => {
    const table = readCsv(tempCsv("a,b\n,1\n2.0,1\n"));
    expect(optionalNumberColumn(table, "a")).toEqual([null, 2.0]);
  });
});
