import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { column } from "../src/csv.js";
import { growthTable, renderGrowth } from "../src/growth.js";

const flat = readFileSync(new URL("../fixtures/growth_flat.csv", import.meta.url), "utf8");
const rising = readFileSync(new URL("../fixtures/growth_rising.csv", import.meta.url), "utf8");

describe("renderGrowth", () => {
  it("real-coupling probe stays flat near 1", () => {
    const table = growthTable(flat);
    const mx = column(table, "max_abs_X");
    for (const v of mx) {
      expect(v).toBeGreaterThan(0.85);
      expect(v).toBeLessThanOrEqual(1.0);
    }
    const out = renderGrowth(flat);
    expect(out).toContain("<svg");
    expect(out).toContain("max |X|");
    expect(out).toContain("arg J = 0");
  });

  it("lossy-hopping probe increases and stays below the bound overlay", () => {
    const table = growthTable(rising);
    const mx = column(table, "max_abs_X");
    const bound = column(table, "bound");
    expect(mx[mx.length - 1]).toBeGreaterThan(2 * mx[0]);
    for (let i = 0; i < mx.length; i++) expect(mx[i]).toBeLessThanOrEqual(bound[i]);
    const out = renderGrowth(rising);
    // three series: bound overlay, max|X|, variance
    expect(out.match(/<polyline/g)?.length).toBe(3);
    expect(out).toContain("stroke-dasharray");
    expect(out).toContain("norm-bound chain");
  });

  it("is deterministic", () => {
    expect(renderGrowth(rising)).toBe(renderGrowth(rising));
  });

  it("errors on empty CSV", () => {
    expect(() => renderGrowth("")).toThrowError(/empty CSV/);
  });

  it("errors on a missing column, naming it", () => {
    expect(() => renderGrowth("t,max_abs_X\n0,1\n")).toThrowError(/var_re/);
  });
});
