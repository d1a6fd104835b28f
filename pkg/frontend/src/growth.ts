import { column, parseTable, ResultTable } from "./csv.js";
import * as svg from "./svg.js";

const REQUIRED = ["t", "max_abs_X", "var_re", "var_im", "bound"];

const FLOOR = 1e-16;

function log10(v: number): number {
  return Math.log10(Math.max(v, FLOOR));
}

function decadeLabel(v: number): string {
  return `1e${v}`;
}

/**
 * Log-scale growth plot from a landscape-probe CSV: max|X| and the total
 * sample variance vs t, with the per-step norm-bound chain as a dashed
 * overlay.
 */
export function renderGrowth(text: string): string {
  const table = parseTable(text, REQUIRED);
  const W = 560;
  const H = 400;
  const f: svg.Frame = { x0: 70, y0: 56, w: 430, h: 280 };

  const t = column(table, "t");
  const maxAbs = column(table, "max_abs_X").map(log10);
  const variance = table.rows.map((r) => log10(r.var_re + r.var_im));
  const bound = column(table, "bound").map(log10);

  let lo = Math.min(...maxAbs, ...variance, ...bound);
  let hi = Math.max(...maxAbs, ...variance, ...bound);
  lo = Math.floor(lo - 0.2);
  hi = Math.ceil(hi + 0.2);
  const yTicks: number[] = [];
  const every = Math.max(1, Math.ceil((hi - lo) / 6));
  for (let v = lo; v <= hi; v += every) yTicks.push(v);

  const sx = svg.linScale(Math.min(...t), Math.max(...t), f.x0, f.x0 + f.w);
  const sy = svg.linScale(lo, hi, f.y0 + f.h, f.y0);

  const parts: string[] = [];
  parts.push(svg.axes(f, sx, sy, svg.niceTicks(...sx.domain), yTicks, "t", "log scale", decadeLabel));
  parts.push(
    svg.polyline(t.map((x, i) => [sx(x), sy(bound[i])]), 'stroke="#888" stroke-width="1" stroke-dasharray="4 3"'),
  );
  parts.push(svg.polyline(t.map((x, i) => [sx(x), sy(maxAbs[i])]), 'stroke="#1f77b4" stroke-width="1.5"'));
  for (let i = 0; i < t.length; i++) parts.push(svg.circleMarker(sx(t[i]), sy(maxAbs[i]), 2.5, "#1f77b4"));
  parts.push(svg.polyline(t.map((x, i) => [sx(x), sy(variance[i])]), 'stroke="#2ca02c" stroke-width="1.5"'));
  for (let i = 0; i < t.length; i++) parts.push(svg.squareMarker(sx(t[i]), sy(variance[i]), 2.2, "#2ca02c"));

  const legend: Array<[string, string, boolean]> = [
    ["#1f77b4", "max |X|", false],
    ["#2ca02c", "sample variance", false],
    ["#888", "norm-bound chain", true],
  ];
  let lx = 70;
  for (const [color, label, dashed] of legend) {
    const dash = dashed ? ' stroke-dasharray="4 3"' : "";
    parts.push(`<line x1="${svg.fmt(lx)}" y1="24" x2="${svg.fmt(lx + 26)}" y2="24" stroke="${color}" stroke-width="1.5"${dash}/>`);
    parts.push(svg.text(lx + 32, 28, label, 'font-size="11"'));
    lx += 44 + 7 * label.length;
  }
  if (["arg_J", "arg_U", "s"].every((c) => table.columns.includes(c))) {
    const r0 = table.rows[0];
    const title =
      `arg J = ${svg.tickLabel(Number(r0.arg_J.toPrecision(3)))}, ` +
      `arg U = ${svg.tickLabel(Number(r0.arg_U.toPrecision(3)))}, ` +
      `s = ${svg.tickLabel(Number(r0.s.toPrecision(3)))}`;
    parts.push(svg.text(70, 44, title, 'font-size="10" fill="#555"'));
  }

  return svg.document(W, H, parts.join("\n"));
}

export function growthTable(text: string): ResultTable {
  return parseTable(text, REQUIRED);
}
