import assert from "node:assert/strict";
import { test } from "node:test";

import { renderChartSvg } from "../src/chart.js";
import { makePoints } from "./helpers.js";

test("renders a polyline for plain data", () => {
  const svg = renderChartSvg(makePoints(50));
  assert.ok(svg.startsWith("<svg"));
  assert.ok(svg.includes("<polyline"));
  assert.ok(svg.endsWith("</svg>"));
});

test("marks imputed points and outliers distinctly", () => {
  const svg = renderChartSvg(makePoints(60, "2021-01-01T00:00:00Z", [10, 20], [40]));
  assert.equal((svg.match(/class="imputed"/g) ?? []).length, 2);
  assert.equal((svg.match(/class="outlier"/g) ?? []).length, 1);
});

test("splits the polyline around reverted (null) values", () => {
  const points = makePoints(30);
  points[15].value = null;
  const svg = renderChartSvg(points);
  assert.equal((svg.match(/<polyline/g) ?? []).length, 2);
});

test("handles an all-null window", () => {
  const points = makePoints(5).map((p) => ({ ...p, value: null }));
  const svg = renderChartSvg(points);
  assert.ok(svg.includes("no data"));
});

test("flat series still renders (degenerate y-range)", () => {
  const points = makePoints(10).map((p) => ({ ...p, value: 42 }));
  const svg = renderChartSvg(points);
  assert.ok(svg.includes("<polyline"));
});
