import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, statSync } from "node:fs";
import { tmpdir } from "node:os";
import { fileURLToPath } from "node:url";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

const cli = fileURLToPath(new URL("../dist/cli.js", import.meta.url));
const fixture = (name: string) => fileURLToPath(new URL(`../fixtures/${name}`, import.meta.url));
const outDir = mkdtempSync(join(tmpdir(), "plots-"));

function run(...args: string[]) {
  return spawnSync(process.execPath, [cli, ...args], { encoding: "utf8" });
}

describe("cli", () => {
  it("render-fig1 exits 0 and writes a non-empty SVG", () => {
    const out = join(outDir, "fig1.svg");
    const res = run("render-fig1", fixture("fig1.csv"), "--out", out);
    expect(res.status).toBe(0);
    expect(statSync(out).size).toBeGreaterThan(0);
    expect(readFileSync(out, "utf8")).toContain("</svg>");
  });

  it("render-growth exits 0 and writes a non-empty SVG", () => {
    const out = join(outDir, "growth.svg");
    const res = run("render-growth", fixture("growth_rising.csv"), "--out", out);
    expect(res.status).toBe(0);
    expect(statSync(out).size).toBeGreaterThan(0);
  });

  it("reports a missing column on stderr and exits nonzero", () => {
    const res = run("render-growth", fixture("fig1.csv"), "--out", join(outDir, "x.svg"));
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("max_abs_X");
  });

  it("rejects unknown commands and missing files", () => {
    expect(run("render-everything", fixture("fig1.csv")).status).toBe(1);
    const res = run("render-fig1", join(outDir, "absent.csv"));
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("absent.csv");
  });

  it("rejects non-svg output paths", () => {
    const res = run("render-fig1", fixture("fig1.csv"), "--out", join(outDir, "fig1.png"));
    expect(res.status).toBe(1);
    expect(res.stderr).toContain(".svg");
  });

  it("defaults --out to the CSV path with .svg extension", () => {
    const src = join(outDir, "copy.csv");
    const res0 = spawnSync("cp", [fixture("fig1_single.csv"), src]);
    expect(res0.status).toBe(0);
    const res = run("render-fig1", src);
    expect(res.status).toBe(0);
    expect(statSync(join(outDir, "copy.svg")).size).toBeGreaterThan(0);
  });
});
