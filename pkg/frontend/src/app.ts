import { ApiClient } from "./api.js";
import { renderChartSvg } from "./chart.js";
import { fmtInstant, fmtNumber, fmtPercent, fmtStats } from "./format.js";
import {
  AppState,
  Action,
  currentWindow,
  initialState,
  reduce,
  reportCounts,
  revertableEntries,
  sliderStates,
  validateCleanForm,
} from "./state.js";
import { BUILTIN_METHODS } from "./types.js";

const api = new ApiClient("");
let state: AppState = initialState();
let pollGeneration = 0;

function dispatch(action: Action): void {
  state = reduce(state, action);
  render();
}

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function setBusy(message: string | null): void {
  const el = $("busy");
  el.textContent = message ?? "";
  el.classList.toggle("hidden", message === null);
}

function showError(err: unknown): void {
  const message = err instanceof Error ? err.message : String(err);
  $("error").textContent = message;
  $("error").classList.remove("hidden");
}

function clearError(): void {
  $("error").classList.add("hidden");
}

// --- upload screen ----------------------------------------------------------

async function onUpload(): Promise<void> {
  clearError();
  const input = $("file-input") as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) {
    showError(new Error("choose a CSV file first"));
    return;
  }
  try {
    setBusy("uploading...");
    const meta = await api.upload(file, file.name);
    dispatch({
      kind: "uploaded",
      sessionId: meta.id,
      columns: meta.columns,
      rowCount: meta.row_count,
    });
    renderPreview(meta.preview, meta.columns);
    await renderInputSummary(meta.id);
  } catch (err) {
    showError(err);
  } finally {
    setBusy(null);
  }
}

function renderPreview(preview: string[][], columns: string[]): void {
  const head = columns.map((c) => `<th>${c}</th>`).join("");
  const rows = preview
    .map((r) => `<tr>${r.map((c) => `<td>${c}</td>`).join("")}</tr>`)
    .join("");
  $("preview").innerHTML =
    `<table><thead><tr>${head}</tr></thead><tbody>${rows}</tbody></table>`;
}

async function renderInputSummary(sessionId: string): Promise<void> {
  const meta = await api.status(sessionId);
  const parts = Object.entries(meta.value_summaries).map(
    ([col, stats]) => `<div><b>${col}</b>: ${fmtStats(stats)}</div>`,
  );
  $("input-summary").innerHTML =
    parts.join("") || "<div>no numeric columns detected</div>";
  const timeSel = $("time-col") as HTMLSelectElement;
  const valueSel = $("value-col") as HTMLSelectElement;
  for (const sel of [timeSel, valueSel]) {
    sel.innerHTML = `<option value="">(default)</option>` +
      meta.columns.map((c) => `<option value="${c}">${c}</option>`).join("");
  }
}

// --- configure and run ------------------------------------------------------

function selectedMethods(): string[] {
  return BUILTIN_METHODS.filter(
    (m) => ($(`method-${m}`) as HTMLInputElement).checked,
  );
}

async function onStartClean(): Promise<void> {
  clearError();
  if (!state.sessionId) return;
  const dateFormat = ($("date-format") as HTMLInputElement).value;
  const methods = selectedMethods();
  const problem = validateCleanForm(methods, dateFormat);
  if (problem) {
    showError(new Error(problem));
    return;
  }
  const req = {
    date_format: dateFormat.trim(),
    time: ($("time-col") as HTMLSelectElement).value || null,
    value: ($("value-col") as HTMLSelectElement).value || null,
    methods,
    replace_outliers: ($("replace-outliers") as HTMLInputElement).checked,
    alpha: Number(($("alpha") as HTMLInputElement).value) || 0.05,
    seed: Number(($("seed") as HTMLInputElement).value) || 0,
  };
  const generation = ++pollGeneration;
  try {
    await api.startClean(state.sessionId, req);
    dispatch({ kind: "clean_started" });
    await api.pollUntilDone(state.sessionId, 400,
                            () => generation !== pollGeneration);
    dispatch({ kind: "clean_done" });
    await refreshResult();
    await refreshWindows();
  } catch (err) {
    dispatch({ kind: "clean_failed", message: String(err) });
    showError(err);
  }
}

async function refreshResult(): Promise<void> {
  if (!state.sessionId) return;
  const result = await api.result(state.sessionId);
  dispatch({ kind: "result_loaded", result });
  const text = await api.reportText(state.sessionId);
  $("report-text").textContent = text;
}

// --- report view with revert -----------------------------------------------

async function onRevert(): Promise<void> {
  clearError();
  if (!state.sessionId) return;
  const boxes = document.querySelectorAll<HTMLInputElement>(".revert-box:checked");
  const ids = Array.from(boxes).map((b) => Number(b.dataset.changeId));
  if (!ids.length) return;
  try {
    setBusy("reverting...");
    const result = await api.revert(state.sessionId, ids);
    // the revert response IS the updated result: no re-clean, no reload
    dispatch({ kind: "result_loaded", result });
    const text = await api.reportText(state.sessionId);
    $("report-text").textContent = text;
    await refreshWindows();
  } catch (err) {
    showError(err);
  } finally {
    setBusy(null);
  }
}

// --- window explorer --------------------------------------------------------

async function refreshWindows(): Promise<void> {
  if (!state.sessionId || state.status !== "done") return;
  const interval = ($("interval") as HTMLInputElement).value.trim() || "1 month";
  try {
    const payload = await api.windows(state.sessionId, interval);
    dispatch({ kind: "windows_loaded", windows: payload.windows });
  } catch (err) {
    showError(err);
  }
}

function onSlider(): void {
  const slider = $("window-slider") as HTMLInputElement;
  dispatch({ kind: "slider_moved", index: Number(slider.value) });
}

// --- rendering --------------------------------------------------------------

function render(): void {
  $("screen-upload").classList.toggle("hidden", false);
  const haveSession = state.sessionId !== null;
  $("screen-configure").classList.toggle("hidden", !haveSession);
  const done = state.status === "done" && state.result !== null;
  $("screen-result").classList.toggle("hidden", !done);
  $("status-badge").textContent = state.status;
  $("status-badge").dataset.status = state.status;

  if (done && state.result) {
    const counts = reportCounts(state.result);
    $("global-counts").innerHTML = [
      `rows: <b>${state.result.clean_data.length}</b>`,
      `missing timestamps: <b>${counts.missingTs}</b>`,
      `duplicate timestamps: <b>${counts.duplicateTs}</b>`,
      `imputed: <b id="imputed-count">${counts.imputed}</b> ` +
        `(${fmtPercent(counts.imputed, state.result.clean_data.length)};` +
        ` mcar ${counts.mcar}, mar ${counts.mar})`,
      `outliers replaced: <b>${counts.outliers}</b>`,
    ].map((s) => `<div>${s}</div>`).join("");
    renderChangeTable();
    renderExplorer();
    const link = $("export-link") as HTMLAnchorElement;
    link.href = api.exportUrl(state.sessionId as string);
  }
}

function renderChangeTable(): void {
  if (!state.result) return;
  const rows = revertableEntries(state.result).map((e) => {
    const when = e.time ? fmtInstant(e.time) : "";
    return (
      `<tr><td><input type="checkbox" class="revert-box" data-change-id="${e.id}"></td>` +
      `<td>${e.id}</td><td>${e.kind}</td><td>${when}</td>` +
      `<td>${fmtNumber(e.before)}</td><td>${fmtNumber(e.after)}</td></tr>`
    );
  });
  $("change-table").innerHTML =
    `<table><thead><tr><th></th><th>id</th><th>kind</th><th>time</th>` +
    `<th>before</th><th>after</th></tr></thead><tbody>${rows.join("")}</tbody></table>`;
}

function renderExplorer(): void {
  const slider = $("window-slider") as HTMLInputElement;
  const states = sliderStates(state);
  slider.max = String(Math.max(0, states - 1));
  slider.value = String(state.windowIndex);
  slider.disabled = states <= 1;
  $("window-label").textContent = states
    ? `window ${state.windowIndex + 1} of ${states}`
    : "no windows";
  const win = currentWindow(state);
  if (!win) {
    $("chart").innerHTML = "";
    $("state-summary").textContent = "";
    return;
  }
  $("chart").innerHTML = renderChartSvg(win.points);
  const s = win.summary;
  $("state-summary").innerHTML = [
    `${fmtInstant(win.time_range.start)} to ${fmtInstant(win.time_range.end)}`,
    `points: <b>${win.points.length}</b>`,
    fmtStats(s.stats),
    `imputed: <b>${s.n_missing_imputed}</b>  outliers: <b>${s.n_outliers}</b>` +
      `  missing ts: <b>${s.n_missing_ts}</b>  duplicate ts: <b>${s.n_duplicate_ts}</b>`,
  ].map((x) => `<div>${x}</div>`).join("");
}

export function mount(): void {
  $("upload-btn").addEventListener("click", () => void onUpload());
  $("start-btn").addEventListener("click", () => void onStartClean());
  $("revert-btn").addEventListener("click", () => void onRevert());
  $("interval-btn").addEventListener("click", () => void refreshWindows());
  $("window-slider").addEventListener("input", onSlider);
  render();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount();
}
