import { downsample } from "./downsample.js";
import type { PointRow } from "./types.js";

export interface ChartOptions {
  width: number;
  height: number;
  padLeft: number;
  padBottom: number;
  padTop: number;
}

const DEFAULTS: ChartOptions = {
  width: 860,
  height: 320,
  padLeft: 56,
  padBottom: 24,
  padTop: 12,
};

function fmt(x: number): string {
  return x.toFixed(2);
}

/**
 * Render one window as an SVG string: value polyline plus green circles on
 * imputed points and red crosses on outliers.  Pure string-in/string-out,
 * so it is unit-testable without a DOM.
 */
export function renderChartSvg(points: PointRow[], opts: Partial<ChartOptions> = {}): string {
  const o = { ...DEFAULTS, ...opts };
  const drawn = downsample(points);
  const values = drawn.map((p) => p.value).filter((v): v is number => v !== null);
  if (values.length === 0) {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${o.width}" height="${o.height}"><text x="12" y="24">no data</text></svg>`;
  }
  let vmin = Math.min(...values);
  let vmax = Math.max(...values);
  if (vmin === vmax) {
    vmin -= 1;
    vmax += 1;
  }
  const innerW = o.width - o.padLeft - 8;
  const innerH = o.height - o.padTop - o.padBottom;
  const x = (i: number) =>
    o.padLeft + (drawn.length === 1 ? innerW / 2 : (i / (drawn.length - 1)) * innerW);
  const y = (v: number) => o.padTop + (1 - (v - vmin) / (vmax - vmin)) * innerH;

  const segments: string[] = [];
  let run: string[] = [];
  drawn.forEach((p, i) => {
    if (p.value === null) {
      if (run.length) segments.push(run.join(" "));
      run = [];
    } else {
      run.push(`${fmt(x(i))},${fmt(y(p.value))}`);
    }
  });
  if (run.length) segments.push(run.join(" "));

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${o.width}" height="${o.height}" viewBox="0 0 ${o.width} ${o.height}">`,
    `<rect width="${o.width}" height="${o.height}" fill="#fff"/>`,
    `<text x="4" y="${fmt(o.padTop + 10)}" class="axis">${fmt(vmax)}</text>`,
    `<text x="4" y="${fmt(o.padTop + innerH)}" class="axis">${fmt(vmin)}</text>`,
  ];
  for (const seg of segments) {
    parts.push(
      `<polyline fill="none" stroke="#1f77b4" stroke-width="1.2" points="${seg}"/>`,
    );
  }
  drawn.forEach((p, i) => {
    if (p.value === null) return;
    const cx = fmt(x(i));
    const cy = fmt(y(p.value));
    if (p.missing_type !== null) {
      parts.push(
        `<circle class="imputed" cx="${cx}" cy="${cy}" r="4" fill="#2ca02c"><title>imputed (${p.missing_type}, ${p.method_used ?? "?"})</title></circle>`,
      );
    }
    if (p.is_outlier) {
      const c = { x: Number(cx), y: Number(cy) };
      parts.push(
        `<path class="outlier" stroke="#d62728" stroke-width="2" d="M${fmt(c.x - 4)},${fmt(c.y - 4)} L${fmt(c.x + 4)},${fmt(c.y + 4)} M${fmt(c.x - 4)},${fmt(c.y + 4)} L${fmt(c.x + 4)},${fmt(c.y - 4)}"><title>outlier</title></path>`,
      );
    }
  });
  parts.push("</svg>");
  return parts.join("");
}
