import type { CleanResultDoc, SessionStatus, WindowPayload } from "./types.js";

/**
 * Client-side session state.  The store is a pure reducer over server
 * responses: every view (report counts, slider, chart) derives from the
 * latest fetched documents, so refreshing or re-fetching reproduces the
 * same UI.
 */
export interface AppState {
  sessionId: string | null;
  status: SessionStatus | "idle" | "error";
  errorMessage: string | null;
  columns: string[];
  rowCount: number;
  result: CleanResultDoc | null;
  windows: WindowPayload[];
  windowIndex: number;
}

export function initialState(): AppState {
  return {
    sessionId: null,
    status: "idle",
    errorMessage: null,
    columns: [],
    rowCount: 0,
    result: null,
    windows: [],
    windowIndex: 0,
  };
}

export type Action =
  | { kind: "uploaded"; sessionId: string; columns: string[]; rowCount: number }
  | { kind: "clean_started" }
  | { kind: "clean_done" }
  | { kind: "clean_failed"; message: string }
  | { kind: "result_loaded"; result: CleanResultDoc }
  | { kind: "windows_loaded"; windows: WindowPayload[] }
  | { kind: "slider_moved"; index: number }
  | { kind: "reset" };

export function reduce(state: AppState, action: Action): AppState {
  switch (action.kind) {
    case "uploaded":
      return {
        ...initialState(),
        sessionId: action.sessionId,
        status: "uploaded",
        columns: action.columns,
        rowCount: action.rowCount,
      };
    case "clean_started":
      return { ...state, status: "cleaning", errorMessage: null, result: null,
               windows: [], windowIndex: 0 };
    case "clean_done":
      return { ...state, status: "done" };
    case "clean_failed":
      return { ...state, status: "failed", errorMessage: action.message };
    case "result_loaded":
      // server round-trip (clean or revert): report counts and chart
      // markers re-derive from this document alone
      return { ...state, result: action.result };
    case "windows_loaded":
      return {
        ...state,
        windows: action.windows,
        windowIndex: Math.min(state.windowIndex, Math.max(0, action.windows.length - 1)),
      };
    case "slider_moved": {
      const clamped = Math.max(0, Math.min(action.index, state.windows.length - 1));
      return { ...state, windowIndex: clamped };
    }
    case "reset":
      return initialState();
  }
}

/** Counts shown in the global report panel, derived from the result doc. */
export interface ReportCounts {
  missingTs: number;
  duplicateTs: number;
  imputed: number;
  mcar: number;
  mar: number;
  outliers: number;
}

export function reportCounts(result: CleanResultDoc): ReportCounts {
  let mcar = 0;
  let mar = 0;
  for (const p of result.clean_data) {
    // a reverted point keeps its gap mechanism but loses its fill: only
    // points that still carry a method count as imputed
    if (p.method_used === null) continue;
    if (p.missing_type === "mcar") mcar += 1;
    else if (p.missing_type === "mar") mar += 1;
  }
  return {
    missingTs: result.missing_ts.length,
    duplicateTs: result.duplicate_ts.length,
    imputed: mcar + mar,
    mcar,
    mar,
    outliers: result.outliers.length,
  };
}

/** Change-log rows the user may tick for revert (structural ones cannot). */
export function revertableEntries(result: CleanResultDoc) {
  return result.change_log.filter(
    (e) => e.kind === "imputed_missing" || e.kind === "outlier_replaced",
  );
}

/** Slider configuration for the window explorer: one state per window. */
export function sliderStates(state: AppState): number {
  return state.windows.length;
}

export function currentWindow(state: AppState): WindowPayload | null {
  return state.windows.length ? state.windows[state.windowIndex] : null;
}

export function validateCleanForm(methods: string[], dateFormat: string): string | null {
  if (!dateFormat.trim()) return "enter the timestamp format (e.g. ymdHMS)";
  if (methods.length === 0) return "select at least one imputation method";
  return null;
}
