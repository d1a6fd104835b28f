import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { column, CsvError, parseTable } from "../src/csv.js";

const fig1 = readFileSync(new URL("../fixtures/fig1.csv", import.meta.url), "utf8");

describe("parseTable", () => {
  it("parses the benchmark CSV with all rows numeric", () => {
    const table = parseTable(fig1, ["t", "re_mean", "im_mean", "stderr", "re_exact", "im_exact"]);
    expect(table.rows.length).toBe(21);
    expect(table.columns[0]).toBe("t");
    expect(column(table, "t")[0]).toBe(0);
    expect(column(table, "re_mean")[0]).toBe(1);
    for (const row of table.rows) {
      for (const col of table.columns) expect(Number.isFinite(row[col])).toBe(true);
    }
  });

  it("names the missing column", () => {
    expect(() => parseTable("t,re_mean\n0,1\n", ["t", "re_exact"])).toThrowError(/re_exact/);
  });

  it("rejects empty input", () => {
    expect(() => parseTable("", ["t"])).toThrowError(CsvError);
    expect(() => parseTable("  \n", ["t"])).toThrowError(/empty CSV/);
  });

  it("rejects a header with no data rows", () => {
    expect(() => parseTable("t,re_exact\n", ["t", "re_exact"])).toThrowError(/no data rows/);
  });

  it("rejects non-numeric cells, naming column and row", () => {
    expect(() => parseTable("t,v\n0,1\n1,oops\n", ["t", "v"])).toThrowError(/column v, data row 2/);
  });
});
