/** Deterministic SVG building blocks: no timestamps, fixed formatting. */

export function fmt(x: number): string {
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function tickLabel(x: number): string {
  return Number(x.toPrecision(10)).toString();
}

export interface Scale {
  (x: number): number;
  domain: [number, number];
}

export function linScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) / 2 : 0.5;
    lo -= pad;
    hi += pad;
  }
  const k = (rHi - rLo) / (hi - lo);
  const f = ((x: number) => rLo + (x - lo) * k) as Scale;
  f.domain = [lo, hi];
  return f;
}

/** 1-2-5 ticks covering [lo, hi] with about `target` entries. */
export function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const base = Math.pow(10, Math.floor(Math.log10(span / target)));
  let step = base * 10;
  for (const m of [1, 2, 5]) {
    if (span / (base * m) <= target + 0.5) {
      step = base * m;
      break;
    }
  }
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : Number(v.toPrecision(12)));
  }
  return out;
}

export function polyline(pts: Array<[number, number]>, attrs: string): string {
  const d = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${d}" fill="none" ${attrs}/>`;
}

export function circleMarker(x: number, y: number, r: number, color: string): string {
  return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`;
}

export function squareMarker(x: number, y: number, h: number, color: string): string {
  return `<rect x="${fmt(x - h)}" y="${fmt(y - h)}" width="${fmt(2 * h)}" height="${fmt(2 * h)}" fill="${color}"/>`;
}

/** Vertical error bar with end caps. */
export function errorBar(x: number, yLo: number, yHi: number, cap: number, color: string): string {
  const xs = fmt(x);
  return (
    `<path d="M ${xs} ${fmt(yLo)} V ${fmt(yHi)}` +
    ` M ${fmt(x - cap)} ${fmt(yLo)} H ${fmt(x + cap)}` +
    ` M ${fmt(x - cap)} ${fmt(yHi)} H ${fmt(x + cap)}"` +
    ` stroke="${color}" stroke-width="1" fill="none" class="errbar"/>`
  );
}

export function text(x: number, y: number, s: string, attrs = ""): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-family="sans-serif" ${attrs}>${s}</text>`;
}

export interface Frame {
  x0: number;
  y0: number;
  w: number;
  h: number;
}

/** Panel frame with tick marks, tick labels, and axis titles. */
export function axes(
  f: Frame,
  sx: Scale,
  sy: Scale,
  xTicks: number[],
  yTicks: number[],
  xLabel: string,
  yLabel: string,
  yTickLabel: (v: number) => string = tickLabel,
): string {
  const parts: string[] = [];
  parts.push(
    `<rect x="${fmt(f.x0)}" y="${fmt(f.y0)}" width="${fmt(f.w)}" height="${fmt(f.h)}"` +
      ` fill="none" stroke="#222" stroke-width="1"/>`,
  );
  const yBot = f.y0 + f.h;
  for (const v of xTicks) {
    const x = sx(v);
    parts.push(`<line x1="${fmt(x)}" y1="${fmt(yBot)}" x2="${fmt(x)}" y2="${fmt(yBot - 4)}" stroke="#222"/>`);
    parts.push(text(x, yBot + 14, tickLabel(v), 'font-size="10" text-anchor="middle"'));
  }
  for (const v of yTicks) {
    const y = sy(v);
    parts.push(`<line x1="${fmt(f.x0)}" y1="${fmt(y)}" x2="${fmt(f.x0 + 4)}" y2="${fmt(y)}" stroke="#222"/>`);
    parts.push(
      `<line x1="${fmt(f.x0)}" y1="${fmt(y)}" x2="${fmt(f.x0 + f.w)}" y2="${fmt(y)}"` +
        ` stroke="#ddd" stroke-width="0.5"/>`,
    );
    parts.push(text(f.x0 - 6, y + 3, yTickLabel(v), 'font-size="10" text-anchor="end"'));
  }
  parts.push(text(f.x0 + f.w / 2, yBot + 30, xLabel, 'font-size="12" text-anchor="middle"'));
  parts.push(
    `<text x="${fmt(f.x0 - 38)}" y="${fmt(f.y0 + f.h / 2)}" font-family="sans-serif" font-size="12"` +
      ` text-anchor="middle" transform="rotate(-90 ${fmt(f.x0 - 38)} ${fmt(f.y0 + f.h / 2)})">${yLabel}</text>`,
  );
  return parts.join("\n");
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"` +
    ` viewBox="0 0 ${width} ${height}">\n<rect width="${width}" height="${height}" fill="white"/>\n` +
    body +
    "\n</svg>\n"
  );
}
