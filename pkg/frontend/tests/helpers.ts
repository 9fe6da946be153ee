import type { CleanResultDoc, PointRow, WindowPayload } from "../src/types.js";

/** Hourly fixture helpers shared by the store and client tests. */

export function makePoints(
  n: number,
  startIso = "2021-01-01T00:00:00Z",
  imputedAt: number[] = [],
  outlierAt: number[] = [],
): PointRow[] {
  const start = Date.parse(startIso);
  const points: PointRow[] = [];
  for (let i = 0; i < n; i++) {
    const iso = new Date(start + i * 3600_000).toISOString().replace(".000Z", "Z");
    points.push({
      time: iso,
      value: 50 + Math.sin(i / 10) * 5,
      missing_type: imputedAt.includes(i) ? "mcar" : null,
      method_used: imputedAt.includes(i) ? "na_interpolation" : null,
      is_outlier: outlierAt.includes(i),
    });
  }
  return points;
}

export function makeWindows(sizes: number[]): WindowPayload[] {
  return sizes.map((size, index) => {
    const points = makePoints(size);
    return {
      index,
      time_range: {
        start: points[0].time,
        end: points[points.length - 1].time,
      },
      summary: {
        stats: { min: 45, q1: 48, median: 50, mean: 50, q3: 52, max: 55 },
        n_missing_imputed: 0,
        n_outliers: 0,
        n_missing_ts: 0,
        n_duplicate_ts: 0,
      },
      points,
    };
  });
}

export function makeResultDoc(
  n: number,
  imputedAt: number[],
  outlierAt: number[] = [],
): CleanResultDoc {
  const points = makePoints(n, "2021-01-01T00:00:00Z", imputedAt, outlierAt);
  const changeLog = imputedAt.map((i, k) => ({
    id: k,
    kind: "imputed_missing",
    time: points[i].time,
    before: null,
    after: points[i].value,
  }));
  return {
    clean_data: points.map((p) => ({ ...p, orig_value: null })),
    missing_ts: imputedAt.map((i) => points[i].time),
    duplicate_ts: [],
    imp_methods: ["na_interpolation", "na_locf", "na_ma", "na_kalman"],
    mcar_err: { na_interpolation: 1.0, na_locf: 2.0, na_ma: 1.5, na_kalman: 1.2 },
    mar_err: null,
    outliers: [],
    outlier_mcar_err: null,
    outlier_mar_err: null,
    change_log: changeLog,
  };
}

/** Apply a revert the way the server would: value back to null, entry gone. */
export function serverRevert(doc: CleanResultDoc, ids: number[]): CleanResultDoc {
  const idSet = new Set(ids);
  const revertedTimes = new Set(
    doc.change_log.filter((e) => idSet.has(e.id)).map((e) => e.time),
  );
  return {
    ...doc,
    clean_data: doc.clean_data.map((p) =>
      revertedTimes.has(p.time)
        ? { ...p, value: null, method_used: null }
        : p,
    ),
    change_log: doc.change_log.filter((e) => !idSet.has(e.id)),
  };
}
