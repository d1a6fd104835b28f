import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { renderFig1 } from "../src/fig1.js";

const fig1 = readFileSync(new URL("../fixtures/fig1.csv", import.meta.url), "utf8");
const single = readFileSync(new URL("../fixtures/fig1_single.csv", import.meta.url), "utf8");

describe("renderFig1", () => {
  it("draws two panels with exact curves and error bars", () => {
    const out = renderFig1(fig1);
    expect(out.startsWith("<svg")).toBe(true);
    // two panel frames plus the white background
    expect(out.match(/<rect[^>]*stroke="#222"/g)?.length).toBe(2);
    // exact curves: 2 series x 2 panels, plus the dashed averaged overlay x 2
    const lines = out.match(/<polyline/g)?.length ?? 0;
    expect(lines).toBe(6);
    // one error bar per row per series per panel
    expect(out.match(/class="errbar"/g)?.length).toBe(21 * 2 * 2);
    expect(out).toContain("Re Ψ");
    expect(out).toContain("Im Ψ");
    expect(out).toContain(">t<");
  });

  it("is deterministic and carries no timestamp", () => {
    expect(renderFig1(fig1)).toBe(renderFig1(fig1));
    expect(renderFig1(fig1)).not.toMatch(/\d{4}-\d{2}-\d{2}/);
  });

  it("handles a single-row CSV", () => {
    const out = renderFig1(single);
    expect(out).toContain("<svg");
    expect(out.match(/class="errbar"/g)?.length).toBe(1 * 2 * 2);
  });

  it("works from the minimal column set (no alt, no averaged overlay)", () => {
    const head = "t,re_mean,im_mean,stderr,re_exact,im_exact";
    const out = renderFig1(`${head}\n0,1,0,0,1,0\n1,0.5,0.1,0.02,0.49,0.12\n`);
    expect(out.match(/<polyline/g)?.length).toBe(2);
    expect(out).not.toContain("averaged channel");
  });

  it("errors on a missing required column, naming it", () => {
    const broken = fig1
      .split("\n")
      .map((line) => line.split(",").filter((_, i) => i !== 4).join(","))
      .join("\n");
    expect(() => renderFig1(broken)).toThrowError(/re_exact/);
  });
});
