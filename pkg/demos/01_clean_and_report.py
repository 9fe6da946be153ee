"""Clean a messy synthetic hourly series end to end and print the report.

The input has every impurity the cleaner handles: a missing timestamp, a
duplicated timestamp (with agreeing values), a conflicting duplicate, a
scattering of missing values, an unparseable cell, and one huge spike.
"""

import numpy as np

from tscrub import BenchmarkConfig, RawTable, clean, generate_report
from tscrub.timestamps import parse_format_order, parse_timestamp, render_instant

rng = np.random.default_rng(5)
order = parse_format_order("ymdHMS")
start = parse_timestamp("2022-01-01 00:00:00", order)

n = 24 * 30  # one month, hourly
t = np.arange(n)
signal = 200 + 20 * np.sin(2 * np.pi * t / 24) + rng.normal(0, 3, n)
signal[500] += 250  # outlier

rows_t, rows_v = [], []
for k in range(n):
    if k == 100:
        continue  # missing timestamp
    iso = render_instant(start + 3600 * k).replace("T", " ").replace("Z", "")
    value = "%.3f" % signal[k]
    if k in (50, 51, 52):
        value = ""            # a MAR block
    if k == 300:
        value = "sensor?!"    # coercion failure -> treated as missing
    rows_t.append(iso)
    rows_v.append(value)
    if k == 200:              # duplicate with the same value: deduplicated
        rows_t.append(iso)
        rows_v.append(value)
    if k == 400:              # duplicate with a different value: nulled
        rows_t.append(iso)
        rows_v.append("%.3f" % (signal[k] + 99))

table = RawTable(column_names=["time", "value"], columns=[rows_t, rows_v])
result = clean(table, "ymdHMS", benchmark_cfg=BenchmarkConfig(seed=7))

print(generate_report(result))
print(f"change log: {len(result.change_log)} entries, kinds:",
      sorted({e.kind for e in result.change_log}))
