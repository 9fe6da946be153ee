"""Split a cleaned series into calendar windows and emit SVG frames.

Writes frame_XXXX.svg files plus index.json into ./demo_frames; any GIF
encoder (or the web UI's slider) can step through them.
"""

import json
from pathlib import Path

import numpy as np

from tscrub import BenchmarkConfig, RawTable, clean, parse_interval_spec, render_frames, split_windows
from tscrub.timestamps import parse_format_order, parse_timestamp, render_instant

rng = np.random.default_rng(8)
order = parse_format_order("ymdHMS")
start = parse_timestamp("2022-03-01 00:00:00", order)

n = 24 * 90  # three months, hourly
t = np.arange(n)
y = 120 + 15 * np.sin(2 * np.pi * t / 24) + 6 * np.sin(2 * np.pi * t / 168) + rng.normal(0, 2, n)
cells = ["%.2f" % v for v in y]
for k in (700, 1500, 1501, 1502):
    cells[k] = ""  # some gaps so the frames show imputation markers

table = RawTable(
    ["time", "value"],
    [[render_instant(start + 3600 * k).replace("T", " ").replace("Z", "")
      for k in range(n)], cells],
)
result = clean(table, "ymdHMS", benchmark_cfg=BenchmarkConfig(seed=1))

windows = split_windows(result, parse_interval_spec("1 month"))
out_dir = Path(__file__).parent / "demo_frames"
entries = render_frames(result, windows, out_dir)

print(f"wrote {len(entries)} frames to {out_dir}")
for e in entries:
    s = e["summary"]
    print(f"  {e['frame']}  {e['time_range']['start']} .. {e['time_range']['end']}"
          f"  imputed={s['n_missing_imputed']} outliers={s['n_outliers']}")
print("index.json:", json.dumps(entries[0]["summary"]["stats"], indent=None)[:60], "...")
