/** Small display helpers shared by the report panel and window explorer. */

export function fmtNumber(x: number | null | undefined, digits = 6): string {
  if (x === null || x === undefined || Number.isNaN(x)) return "NA";
  return Number(x.toPrecision(digits)).toString();
}

export function fmtPercent(count: number, total: number): string {
  if (total === 0) return "0%";
  const pct = (100 * count) / total;
  return `${Number(pct.toFixed(4))}%`;
}

export function fmtInstant(iso: string): string {
  return iso.replace("T", " ").replace("Z", " UTC");
}

export function fmtStats(stats: Record<string, number | null>): string {
  const order = ["min", "q1", "median", "mean", "q3", "max"];
  return order
    .map((k) => `${k} ${fmtNumber(stats[k] ?? null, 5)}`)
    .join("  ");
}
