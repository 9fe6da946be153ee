"""Benchmark-driven method selection.

Gaps are classified by run length (isolated point -> MCAR, contiguous run
-> MAR).  For each mechanism present, matching missingness is simulated on
the longest gap-free stretch of the series, every candidate method fills
the simulated gaps, and the per-method RMSE against the held-out truth
decides which method imputes that mechanism's real gaps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .concurrency import ordered_map
from .errors import CannotPlaceBlocks, FractionTooSmall, SegmentTooShort
from .imputation import DEFAULT_METHODS, MethodRegistry
from .model import (
    MISSING_MAR,
    MISSING_MCAR,
    ErrorRow,
    classify_missing_runs,
)

logger = logging.getLogger(__name__)

MIN_SEGMENT = 20


@dataclass(frozen=True)
class GapClassification:
    """Disjoint, ascending gap runs: (start index, length, mechanism)."""

    runs: list[tuple[int, int, str]]

    def mechanisms(self) -> list[str]:
        present = []
        for mech in (MISSING_MCAR, MISSING_MAR):
            if any(r[2] == mech for r in self.runs):
                present.append(mech)
        return present

    def mar_lengths(self) -> list[int]:
        return [length for _, length, mech in self.runs if mech == MISSING_MAR]

    def gap_count(self) -> int:
        return sum(length for _, length, _ in self.runs)


@dataclass(frozen=True)
class BenchmarkConfig:
    methods: tuple[str, ...] = DEFAULT_METHODS
    sim_fraction: float = 0.10
    repetitions: int = 5
    seed: int = 0
    metric: str = "rmse"

    def __post_init__(self) -> None:
        if not 0 < self.sim_fraction < 1:
            raise ValueError("sim_fraction must be in (0, 1)")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        if self.metric != "rmse":
            raise ValueError(f"unknown metric {self.metric!r}")


def classify_gaps(values: np.ndarray) -> GapClassification:
    """Length-1 NaN runs are MCAR, longer runs MAR."""
    return GapClassification(runs=classify_missing_runs(np.asarray(values)))


def simulate_missing(
    observed: np.ndarray,
    mechanism: str,
    fraction: float,
    block_lengths: Optional[list[int]] = None,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Mask a gap-free series the way the given mechanism would.

    MCAR masks exactly ``round(fraction * n)`` uniform positions.  MAR
    drops contiguous blocks whose lengths are drawn with replacement from
    ``block_lengths``, rejecting overlapping placements, until at least
    that many positions are masked.  Deterministic in (seed, inputs).

    Raises
    ------
    FractionTooSmall, CannotPlaceBlocks
    """
    observed = np.asarray(observed, dtype=np.float64)
    if np.isnan(observed).any():
        raise ValueError("simulate_missing needs a gap-free input")
    n = len(observed)
    target = int(round(fraction * n))
    if target < 1:
        raise FractionTooSmall(
            f"fraction {fraction} of {n} points masks nothing"
        )
    rng = np.random.default_rng(seed)
    mask = np.zeros(n, dtype=bool)
    if mechanism == MISSING_MCAR:
        mask[rng.choice(n, size=target, replace=False)] = True
    elif mechanism == MISSING_MAR:
        lengths = [l for l in (block_lengths or []) if 0 < l <= n]
        if not lengths:
            raise ValueError("MAR simulation needs usable block lengths")
        masked = 0
        rejected = 0
        while masked < target:
            length = int(rng.choice(lengths))
            start = int(rng.integers(0, n - length + 1))
            if mask[start:start + length].any():
                rejected += 1
                if rejected >= 1000:
                    raise CannotPlaceBlocks(
                        f"gave up after {rejected} overlapping placements"
                    )
                continue
            mask[start:start + length] = True
            masked += length
    else:
        raise ValueError(f"unknown mechanism {mechanism!r}")
    masked_values = observed.copy()
    masked_values[mask] = np.nan
    return masked_values, mask


def score(
    truth: np.ndarray, filled: np.ndarray, mask: np.ndarray, metric: str = "rmse"
) -> float:
    """RMSE over the masked positions."""
    if metric != "rmse":
        raise ValueError(f"unknown metric {metric!r}")
    truth = np.asarray(truth, dtype=np.float64)
    filled = np.asarray(filled, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if truth.shape != filled.shape or truth.shape != mask.shape:
        raise ValueError("truth, filled, and mask must share a shape")
    if not mask.any():
        raise ValueError("mask is empty")
    err = filled[mask] - truth[mask]
    return float(np.sqrt(np.mean(err * err)))


def longest_gap_free_segment(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    best_start, best_len = 0, 0
    i, n = 0, len(values)
    gap = np.isnan(values)
    while i < n:
        if gap[i]:
            i += 1
            continue
        j = i
        while j < n and not gap[j]:
            j += 1
        if j - i > best_len:
            best_start, best_len = i, j - i
        i = j
    return values[best_start:best_start + best_len]


def evaluate_methods(
    values: np.ndarray,
    cls: GapClassification,
    cfg: BenchmarkConfig,
    registry: MethodRegistry,
) -> tuple[Optional[ErrorRow], Optional[ErrorRow]]:
    """Mean per-method score per mechanism present in the classification.

    Round ``r`` simulates with ``cfg.seed + r``, so results are bit-for-bit
    reproducible no matter how the per-method fills are scheduled.
    Mechanisms with no real gaps come back as None.

    Raises
    ------
    SegmentTooShort
        Longest gap-free segment is under 20 points.
    """
    segment = longest_gap_free_segment(values)
    if len(segment) < MIN_SEGMENT:
        raise SegmentTooShort(
            f"longest gap-free segment has {len(segment)} points; "
            f"need {MIN_SEGMENT}"
        )
    method_ids = list(dict.fromkeys(cfg.methods))
    rows: dict[str, ErrorRow] = {}
    for mechanism in cls.mechanisms():
        block_lengths = cls.mar_lengths() if mechanism == MISSING_MAR else None
        totals = {mid: 0.0 for mid in method_ids}
        for r in range(cfg.repetitions):
            masked, mask = simulate_missing(
                segment, mechanism, cfg.sim_fraction, block_lengths,
                seed=cfg.seed + r,
            )
            filled_per_method = ordered_map(
                lambda mid: registry.fill(mid, masked), method_ids
            )
            for mid, filled in zip(method_ids, filled_per_method):
                totals[mid] += score(segment, filled, mask, cfg.metric)
        rows[mechanism] = {
            mid: totals[mid] / cfg.repetitions for mid in method_ids
        }
    return rows.get(MISSING_MCAR), rows.get(MISSING_MAR)


def select_best(row: ErrorRow, method_order: Optional[list[str]] = None) -> str:
    """Method id with the lowest score; ties break toward earlier listing."""
    if not row:
        raise ValueError("empty error row")
    order = method_order or list(row)
    best_id, best_score = None, np.inf
    for mid in order:
        if mid in row and row[mid] < best_score:
            best_id, best_score = mid, row[mid]
    assert best_id is not None
    return best_id


def impute_by_mechanism(
    values: np.ndarray,
    cls: GapClassification,
    best_by_mechanism: dict[str, str],
    registry: MethodRegistry,
) -> tuple[np.ndarray, dict[int, tuple[str, str]]]:
    """Fill every gap with its mechanism's chosen method.

    One filled copy is built per distinct chosen method; each gap position
    then takes its value from the copy belonging to its run's mechanism.
    Returns the filled array plus {index: (mechanism, method id)}.
    """
    values = np.asarray(values, dtype=np.float64)
    needed = sorted({best_by_mechanism[m] for _, _, m in cls.runs})
    fills = {mid: registry.fill(mid, values) for mid in needed}
    out = values.copy()
    annotations: dict[int, tuple[str, str]] = {}
    for start, length, mechanism in cls.runs:
        mid = best_by_mechanism[mechanism]
        for i in range(start, start + length):
            out[i] = fills[mid][i]
            annotations[i] = (mechanism, mid)
    return out, annotations
