/** Wire types mirroring the cleaning service's JSON responses. */

export interface UploadResponse {
  id: string;
  columns: string[];
  row_count: number;
  preview: string[][];
}

export type SessionStatus = "uploaded" | "cleaning" | "done" | "failed";

export interface SessionMeta {
  id: string;
  status: SessionStatus;
  columns: string[];
  row_count: number;
  value_summaries: Record<string, Record<string, number>>;
  error: { code: string; message: string; stage: string } | null;
}

export interface CleanRequest {
  date_format: string;
  time?: string | null;
  value?: string | null;
  methods: string[];
  replace_outliers: boolean;
  alpha: number;
  seed: number;
}

export interface PointRow {
  time: string;
  value: number | null;
  missing_type: "mcar" | "mar" | null;
  method_used: string | null;
  is_outlier: boolean;
}

export interface WindowSummary {
  stats: Record<string, number | null>;
  n_missing_imputed: number;
  n_outliers: number;
  n_missing_ts: number;
  n_duplicate_ts: number;
}

export interface WindowPayload {
  index: number;
  time_range: { start: string; end: string };
  summary: WindowSummary;
  points: PointRow[];
}

export interface ChangeEntry {
  id: number;
  kind: string;
  time: string | null;
  before: number | null;
  after: number | null;
}

export interface OutlierRow {
  time: string;
  value: number;
  orig_value: number;
  method_used: string;
}

export interface CleanResultDoc {
  clean_data: Array<PointRow & { orig_value: number | null }>;
  missing_ts: string[];
  duplicate_ts: string[];
  imp_methods: string[];
  mcar_err: Record<string, number> | null;
  mar_err: Record<string, number> | null;
  outliers: OutlierRow[];
  outlier_mcar_err: Record<string, number> | null;
  outlier_mar_err: Record<string, number> | null;
  change_log: ChangeEntry[];
}

export const BUILTIN_METHODS = [
  "na_interpolation",
  "na_locf",
  "na_ma",
  "na_kalman",
] as const;
