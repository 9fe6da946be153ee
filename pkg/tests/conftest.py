"""Shared fixtures: deterministic synthetic datasets shaped like the two
public reference datasets (hourly power load and hourly CO2 intensity).

The power fixture has exactly 27 removed grid instants (including
2004-10-31 02:00), 4 duplicated instants with conflicting values
(including 2014-11-02 02:00), a 121,296-instant hourly grid, and hence
121,273 input rows and 31 missing values, all isolated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pytest

from tscrub.model import RawTable
from tscrub.timestamps import parse_format_order, parse_timestamp, render_instant

YMDHMS = parse_format_order("ymdHMS")
POWER_START = parse_timestamp("2004-10-01 01:00:00", YMDHMS)
POWER_GRID = 121296
POWER_MISSING_INSTANT = parse_timestamp("2004-10-31 02:00:00", YMDHMS)
POWER_DUP_INSTANT = parse_timestamp("2014-11-02 02:00:00", YMDHMS)
CO2_START = parse_timestamp("2016-12-31 23:00:00", YMDHMS)
CO2_ROWS = 1392
CO2_GAP_RUNS = ((200, 48), (600, 60), (1000, 60))


def instant_to_cell(instant: int) -> str:
    return render_instant(instant).replace("T", " ").replace("Z", "")


@dataclass(frozen=True)
class PowerFixture:
    table: RawTable
    removed: list[int]      # the 27 dropped grid instants
    duplicated: list[int]   # the 4 conflicting duplicate instants
    grid_values: np.ndarray


def build_power_fixture() -> PowerFixture:
    rng = np.random.default_rng(2004)
    n = POWER_GRID
    offsets = sorted(
        int(k) for k in rng.choice(np.arange(1000, n - 1000, 7), size=26,
                                   replace=False)
    )
    removed = sorted({POWER_MISSING_INSTANT}
                     | {POWER_START + 3600 * k for k in offsets})
    assert len(removed) == 27
    duplicated = sorted({POWER_DUP_INSTANT}
                        | {POWER_START + 3600 * k for k in (20001, 50003, 90005)})
    assert len(duplicated) == 4
    nan_positions = sorted(removed + duplicated)
    assert all(b - a > 3600 for a, b in zip(nan_positions, nan_positions[1:]))

    t = np.arange(n)
    values = (
        15500
        + 3000 * np.sin(2 * np.pi * t / 24)
        + 1200 * np.sin(2 * np.pi * t / 168)
        + 800 * np.sin(2 * np.pi * t / 8766)
        + rng.normal(0, 400, n)
    ).round()
    removed_set = frozenset(removed)
    dup_set = frozenset(duplicated)
    rows_t: list[str] = []
    rows_v: list[str] = []
    for k in range(n):
        instant = POWER_START + 3600 * k
        if instant in removed_set:
            continue
        cell = instant_to_cell(instant)
        rows_t.append(cell)
        rows_v.append("%d" % values[k])
        if instant in dup_set:
            rows_t.append(cell)
            rows_v.append("%d" % (values[k] + 1234))  # conflicting copy
    assert len(rows_t) == 121273
    table = RawTable(column_names=["Datetime", "LOAD_MW"],
                     columns=[rows_t, rows_v])
    return PowerFixture(table=table, removed=removed, duplicated=duplicated,
                        grid_values=values)


def build_co2_fixture() -> RawTable:
    rng = np.random.default_rng(7)
    n = CO2_ROWS
    t = np.arange(n)
    values = (
        400
        + 15 * np.sin(2 * np.pi * t / 24)
        + 40 * np.sin(2 * np.pi * t / 696)
        + rng.normal(0, 6, n)
    )
    cells = ["%.4f" % v for v in values]
    for start, length in CO2_GAP_RUNS:
        for i in range(start, start + length):
            cells[i] = ""
    times = [instant_to_cell(CO2_START + 3600 * k) for k in range(n)]
    return RawTable(column_names=["area", "MK"], columns=[times, cells])


@pytest.fixture(scope="session")
def power_fixture() -> PowerFixture:
    return build_power_fixture()


@pytest.fixture(scope="session")
def co2_table() -> RawTable:
    return build_co2_fixture()


@pytest.fixture()
def small_table() -> RawTable:
    """10 hourly rows starting 2020-01-01, one gap at 05:00, one dup pair."""
    times = []
    values = []
    base = parse_timestamp("2020-01-01 00:00:00", YMDHMS)
    series = [10.0, 11.0, 12.5, 13.0, 14.0, None, 16.0, 17.5, 18.0, 19.0]
    for k, v in enumerate(series):
        if k == 5:
            continue  # missing timestamp -> gap after regularization
        times.append(instant_to_cell(base + 3600 * k))
        values.append("" if v is None else repr(v))
    # equal-valued duplicate of hour 2
    times.append(instant_to_cell(base + 3600 * 2))
    values.append(repr(12.5))
    return RawTable(column_names=["time", "value"], columns=[times, values])
