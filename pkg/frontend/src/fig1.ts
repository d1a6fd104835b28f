import { column, parseTable, ResultTable } from "./csv.js";
import * as svg from "./svg.js";

const REQUIRED = ["t", "re_mean", "im_mean", "stderr", "re_exact", "im_exact"];

const ALT = ["re_mean_alt", "im_mean_alt", "stderr_alt", "re_exact_alt", "im_exact_alt"];

interface Series {
  label: string;
  color: string;
  mean: string;
  exact: string;
  se: string;
}

/**
 * Two-panel figure (Re and Im of the amplitude vs t): exact curves as solid
 * lines, sampled means as markers with one-stderr bars, the exactly averaged
 * channel as a dashed overlay when the CSV carries it.
 */
export function renderFig1(text: string): string {
  const table = parseTable(text, REQUIRED);
  const hasAlt = ALT.every((c) => table.columns.includes(c));
  const hasAvg = ["re_exact_avg", "im_exact_avg"].every((c) => table.columns.includes(c));

  const W = 880;
  const H = 400;
  const frames: svg.Frame[] = [
    { x0: 62, y0: 56, w: 350, h: 280 },
    { x0: 492, y0: 56, w: 350, h: 280 },
  ];
  const t = column(table, "t");
  const parts: string[] = [];

  for (const [p, re] of [[0, true], [1, false]] as Array<[number, boolean]>) {
    const pre = re ? "re_" : "im_";
    const series: Series[] = [
      { label: "Ψ initial", color: "#1f77b4", mean: pre + "mean", exact: pre + "exact", se: "stderr" },
    ];
    if (hasAlt) {
      series.push({
        label: "Ψ doubly occupied",
        color: "#d62728",
        mean: pre + "mean_alt",
        exact: pre + "exact_alt",
        se: "stderr_alt",
      });
    }
    let lo = Infinity;
    let hi = -Infinity;
    for (const s of series) {
      for (const row of table.rows) {
        lo = Math.min(lo, row[s.exact], row[s.mean] - row[s.se]);
        hi = Math.max(hi, row[s.exact], row[s.mean] + row[s.se]);
      }
    }
    if (hasAvg) {
      for (const row of table.rows) {
        lo = Math.min(lo, row[pre + "exact_avg"]);
        hi = Math.max(hi, row[pre + "exact_avg"]);
      }
    }
    const pad = (hi - lo || 1) * 0.08;
    lo -= pad;
    hi += pad;

    const f = frames[p];
    const sx = svg.linScale(Math.min(...t), Math.max(...t), f.x0, f.x0 + f.w);
    const sy = svg.linScale(lo, hi, f.y0 + f.h, f.y0);
    parts.push(
      svg.axes(f, sx, sy, svg.niceTicks(...sx.domain), svg.niceTicks(...sy.domain), "t", (re ? "Re " : "Im ") + "Ψ"),
    );
    if (hasAvg) {
      parts.push(
        svg.polyline(
          table.rows.map((r) => [sx(r.t), sy(r[pre + "exact_avg"])]),
          'stroke="#888" stroke-width="1" stroke-dasharray="4 3"',
        ),
      );
    }
    for (const s of series) {
      parts.push(
        svg.polyline(
          table.rows.map((r) => [sx(r.t), sy(r[s.exact])]),
          `stroke="${s.color}" stroke-width="1.5"`,
        ),
      );
      for (const r of table.rows) {
        parts.push(svg.errorBar(sx(r.t), sy(r[s.mean] - r[s.se]), sy(r[s.mean] + r[s.se]), 3, s.color));
        parts.push(svg.circleMarker(sx(r.t), sy(r[s.mean]), 2.5, s.color));
      }
    }
  }

  // legend, shared between panels
  const items: Array<[string, string, boolean]> = [["#1f77b4", "Ψ initial config", false]];
  if (hasAlt) items.push(["#d62728", "Ψ both on up-site", false]);
  if (hasAvg) items.push(["#888", "averaged channel", true]);
  let lx = 62;
  for (const [color, label, dashed] of items) {
    const dash = dashed ? ' stroke-dasharray="4 3"' : "";
    parts.push(`<line x1="${svg.fmt(lx)}" y1="24" x2="${svg.fmt(lx + 26)}" y2="24" stroke="${color}" stroke-width="1.5"${dash}/>`);
    if (!dashed) parts.push(svg.circleMarker(lx + 13, 24, 2.5, color));
    parts.push(svg.text(lx + 32, 28, label, 'font-size="11"'));
    lx += 44 + 7 * label.length;
  }
  parts.push(svg.text(62, 44, "lines: dense solution; markers: sampled mean ± stderr", 'font-size="10" fill="#555"'));

  return svg.document(W, H, parts.join("\n"));
}

export function fig1Table(text: string): ResultTable {
  return parseTable(text, REQUIRED);
}
