"""Built-in imputation methods and the method registry.

Every method maps a float array with NaN gaps to an array of the same
length with no gaps and observed positions untouched.  That contract is
enforced at call time for all methods, including user-registered and
external ones.
"""

from __future__ import annotations

import shlex
import subprocess
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import AllMissing, ChildFailed, ContractViolation, DuplicateId
from .kalman import impute_kalman

FillFunction = Callable[[np.ndarray], np.ndarray]

DEFAULT_METHODS = ("na_interpolation", "na_locf", "na_ma", "na_kalman")


def _observed_index(values: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(~np.isnan(values))
    if len(idx) == 0:
        raise AllMissing("every value is absent")
    return idx


def impute_interpolation(values: np.ndarray) -> np.ndarray:
    """Linear interpolation between observed neighbours; constant extension
    for leading/trailing gaps."""
    values = np.asarray(values, dtype=np.float64)
    obs = _observed_index(values)
    out = np.interp(np.arange(len(values)), obs, values[obs])
    out[obs] = values[obs]
    return out

def impute_locf(values: np.ndarray) -> np.ndarray:
    """Last observation carried forward; leading gaps take the first
    observed value."""
    values = np.asarray(values, dtype=np.float64)
    obs = _observed_index(values)
    carried = np.maximum.accumulate(
        np.where(np.isnan(values), -1, np.arange(len(values)))
    )
    carried[carried < 0] = obs[0]
    return values[carried]

def impute_moving_average(values: np.ndarray, k: int = 4) -> np.ndarray:
    """Mean of observed values within index distance ``k`` of each gap.

    A window that covers no observed value doubles ``k`` (for that gap)
    until it does, so the method is total whenever anything was observed.
    """
    if k < 1:
        raise ValueError("window half-width k must be >= 1")
    values = np.asarray(values, dtype=np.float64)
    _observed_index(values)
    out = values.copy()
    n = len(values)
    for i in np.flatnonzero(np.isnan(values)):
        width = k
        while True:
            window = values[max(0, i - width): min(n, i + width + 1)]
            observed = window[~np.isnan(window)]
            if len(observed):
                out[i] = observed.mean()
                break
            width *= 2
    return out


class MethodRegistry:
    """Named imputation methods usable by the benchmark and the pipeline."""

    def __init__(self) -> None:
        self._methods: dict[str, FillFunction] = {}

    def register(self, method_id: str, fill: FillFunction) -> None:
        if method_id in self._methods:
            raise DuplicateId(f"method {method_id!r} already registered")
        self._methods[method_id] = fill

    def ids(self) -> list[str]:
        return list(self._methods)

    def __contains__(self, method_id: str) -> bool:
        return method_id in self._methods

    def fill(self, method_id: str, values: np.ndarray) -> np.ndarray:
        """Run a method and enforce the fill contract.

        Raises
        ------
        KeyError if the id is unknown; ContractViolation if the method
        returns the wrong length, leaves gaps, or changes observed values.
        """
        if method_id not in self._methods:
            raise KeyError(f"unknown imputation method {method_id!r}")
        values = np.asarray(values, dtype=np.float64)
        out = np.asarray(self._methods[method_id](values.copy()), dtype=np.float64)
        if out.shape != values.shape:
            raise ContractViolation(
                f"{method_id}: returned {out.shape[0] if out.ndim else 0} values "
                f"for {len(values)} inputs"
            )
        if np.isnan(out).any():
            raise ContractViolation(f"{method_id}: output still has gaps")
        observed = ~np.isnan(values)
        if not np.array_equal(out[observed], values[observed]):
            raise ContractViolation(f"{method_id}: changed observed values")
        return out


def default_registry() -> MethodRegistry:
    """Fresh registry holding the four built-in methods."""
    registry = MethodRegistry()
    registry.register("na_interpolation", impute_interpolation)
    registry.register("na_locf", impute_locf)
    registry.register("na_ma", impute_moving_average)
    registry.register("na_kalman", impute_kalman)
    return registry


def external_method(command: str | list[str]) -> FillFunction:
    """Wrap an executable as an imputation method.

    The child receives the series on stdin, one decimal per line with an
    empty line per gap, and must echo the filled series in the same
    line-per-value format.  Length mismatches and leftover gaps surface as
    ContractViolation via the registry; a nonzero exit is ChildFailed.
    """
    argv = shlex.split(command) if isinstance(command, str) else list(command)

    def fill(values: np.ndarray) -> np.ndarray:
        lines = [
            "" if np.isnan(v) else repr(float(v))
            for v in np.asarray(values, dtype=np.float64)
        ]
        try:
            proc = subprocess.run(
                argv, input="\n".join(lines) + "\n",
                capture_output=True, text=True,
            )
        except OSError as exc:
            raise ChildFailed(f"{argv[0]}: {exc}") from exc
        if proc.returncode != 0:
            raise ChildFailed(
                f"{argv[0]} exited {proc.returncode}: {proc.stderr.strip()[:200]}"
            )
        out_lines = proc.stdout.splitlines()
        if len(out_lines) != len(lines):
            raise ContractViolation(
                f"{argv[0]}: wrote {len(out_lines)} lines for {len(lines)} values"
            )
        out = np.full(len(lines), np.nan)
        for i, line in enumerate(out_lines):
            token = line.strip()
            if token:
                try:
                    out[i] = float(token)
                except ValueError as exc:
                    raise ContractViolation(
                        f"{argv[0]}: line {i + 1} is not a number: {token!r}"
                    ) from exc
        return out

    return fill


def register_external_methods(
    registry: MethodRegistry, specs: Iterable[str]
) -> None:
    """Register ``id=command`` specs (the CLI form of user methods)."""
    for spec in specs:
        method_id, _, command = spec.partition("=")
        if not method_id or not command:
            raise ValueError(f"expected id=command, got {spec!r}")
        registry.register(method_id, external_method(command))
