import type { PointRow } from "./types.js";

export const MAX_CHART_POINTS = 5000;

/**
 * Min-max binning: never draw more than `limit` points per window.
 * Each bin keeps its lowest and highest value (preserving the visual
 * envelope) plus every annotated point (imputed or outlier), so markers
 * survive downsampling.
 */
export function downsample(points: PointRow[], limit = MAX_CHART_POINTS): PointRow[] {
  if (points.length <= limit) return points;
  const bins = Math.max(1, Math.floor(limit / 2));
  const size = points.length / bins;
  const keep = new Set<number>();
  for (let b = 0; b < bins; b++) {
    const lo = Math.floor(b * size);
    const hi = Math.min(points.length, Math.floor((b + 1) * size));
    let minIdx = -1;
    let maxIdx = -1;
    for (let i = lo; i < hi; i++) {
      const v = points[i].value;
      if (points[i].missing_type !== null || points[i].is_outlier) keep.add(i);
      if (v === null) continue;
      if (minIdx < 0 || v < (points[minIdx].value as number)) minIdx = i;
      if (maxIdx < 0 || v > (points[maxIdx].value as number)) maxIdx = i;
    }
    if (minIdx >= 0) keep.add(minIdx);
    if (maxIdx >= 0) keep.add(maxIdx);
  }
  return Array.from(keep).sort((a, b) => a - b).map((i) => points[i]);
}
