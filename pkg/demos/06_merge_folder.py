"""Merge a folder of CSVs on their timestamp columns (full outer join).

The two files use different timestamp layouts; each file's column is
parsed by whichever candidate format fits it best.
"""

import tempfile
from pathlib import Path

from tscrub import merge_csv
from tscrub.timestamps import parse_format_order

with tempfile.TemporaryDirectory() as tmp:
    folder = Path(tmp)
    (folder / "plant_a.csv").write_text(
        "timestamp,mw\n"
        "01/06/2022 00:00:00,410\n"
        "01/06/2022 01:00:00,415\n"
        "01/06/2022 02:00:00,403\n"
    )
    (folder / "plant_b.csv").write_text(
        "ts,mw\n"
        "2022-06-01 01:00:00,388\n"
        "2022-06-01 02:00:00,395\n"
        "2022-06-01 03:00:00,401\n"
    )
    merged = merge_csv(folder, [parse_format_order("dmyHMS"),
                                parse_format_order("ymdHMS")])

print(",".join(merged.column_names))
for r in range(merged.row_count):
    print(",".join(col[r] for col in merged.columns))
print()
print("rows are sorted and timestamp-unique; cells absent on one side stay empty")
