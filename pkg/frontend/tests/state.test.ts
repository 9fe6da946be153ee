import assert from "node:assert/strict";
import { test } from "node:test";

import {
  currentWindow,
  initialState,
  reduce,
  reportCounts,
  revertableEntries,
  sliderStates,
  validateCleanForm,
} from "../src/state.js";
import { makeResultDoc, makeWindows, serverRevert } from "./helpers.js";

test("upload resets everything and stores session metadata", () => {
  let state = reduce(initialState(), {
    kind: "uploaded", sessionId: "abc", columns: ["t", "v"], rowCount: 10,
  });
  state = reduce(state, { kind: "clean_started" });
  assert.equal(state.status, "cleaning");
  state = reduce(state, {
    kind: "uploaded", sessionId: "def", columns: ["a", "b"], rowCount: 3,
  });
  assert.equal(state.sessionId, "def");
  assert.equal(state.result, null);
  assert.equal(state.windows.length, 0);
});

test("clean failure carries the message", () => {
  let state = reduce(initialState(), {
    kind: "uploaded", sessionId: "abc", columns: [], rowCount: 0,
  });
  state = reduce(state, { kind: "clean_failed", message: "bad format" });
  assert.equal(state.status, "failed");
  assert.equal(state.errorMessage, "bad format");
});

test("slider exposes exactly one state per server window (3-month fixture)", () => {
  // three calendar-month windows of hourly data: 744 + 672 + 744 points
  const windows = makeWindows([744, 672, 744]);
  let state = reduce(initialState(), {
    kind: "uploaded", sessionId: "s", columns: [], rowCount: 2160,
  });
  state = reduce(state, { kind: "clean_done" });
  state = reduce(state, { kind: "windows_loaded", windows });
  assert.equal(sliderStates(state), 3);
  for (const idx of [0, 1, 2]) {
    state = reduce(state, { kind: "slider_moved", index: idx });
    const win = currentWindow(state);
    assert.ok(win);
    assert.equal(win.points.length, windows[idx].points.length);
  }
});

test("slider position clamps to the window range", () => {
  let state = reduce(initialState(), {
    kind: "uploaded", sessionId: "s", columns: [], rowCount: 0,
  });
  state = reduce(state, { kind: "windows_loaded", windows: makeWindows([5, 5]) });
  state = reduce(state, { kind: "slider_moved", index: 99 });
  assert.equal(state.windowIndex, 1);
  state = reduce(state, { kind: "slider_moved", index: -4 });
  assert.equal(state.windowIndex, 0);
});

test("moving the slider does not touch the fetched windows (no re-clean)", () => {
  const windows = makeWindows([10, 10, 7]);
  let state = reduce(initialState(), {
    kind: "uploaded", sessionId: "s", columns: [], rowCount: 27,
  });
  state = reduce(state, { kind: "windows_loaded", windows });
  const before = state.windows;
  state = reduce(state, { kind: "slider_moved", index: 2 });
  assert.equal(state.windows, before);
});

test("revert of one imputation decrements the imputed count by one", () => {
  const doc = makeResultDoc(100, [5, 40, 77]);
  let state = reduce(initialState(), {
    kind: "uploaded", sessionId: "s", columns: [], rowCount: 100,
  });
  state = reduce(state, { kind: "clean_done" });
  state = reduce(state, { kind: "result_loaded", result: doc });
  assert.equal(reportCounts(state.result!).imputed, 3);

  const ticked = revertableEntries(state.result!)[0];
  const updated = serverRevert(doc, [ticked.id]);
  state = reduce(state, { kind: "result_loaded", result: updated });

  assert.equal(reportCounts(state.result!).imputed, 2);
  assert.equal(revertableEntries(state.result!).length, 2);
  // the session and fetched windows survive: nothing was reloaded
  assert.equal(state.sessionId, "s");
  assert.equal(state.status, "done");
});

test("report counts derive from the result document", () => {
  const doc = makeResultDoc(50, [3, 4, 5, 30]);
  const counts = reportCounts(doc);
  assert.equal(counts.imputed, 4);
  assert.equal(counts.mcar, 4);
  assert.equal(counts.missingTs, 4);
  assert.equal(counts.outliers, 0);
});

test("structural changes are not offered for revert", () => {
  const doc = makeResultDoc(20, [2]);
  doc.change_log.push({
    id: 99, kind: "inserted_timestamp",
    time: doc.clean_data[2].time, before: null, after: null,
  });
  const offered = revertableEntries(doc);
  assert.ok(offered.every((e) => e.kind !== "inserted_timestamp"));
});

test("clean form validation blocks empty method sets", () => {
  assert.equal(validateCleanForm([], "ymdHMS"),
               "select at least one imputation method");
  assert.equal(validateCleanForm(["na_locf"], ""),
               "enter the timestamp format (e.g. ymdHMS)");
  assert.equal(validateCleanForm(["na_locf"], "ymdHMS"), null);
});
