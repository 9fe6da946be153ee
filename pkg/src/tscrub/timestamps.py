"""Order-based timestamp parsing.

A format order is a compact string such as ``"ymdHMS"`` or ``"dmyHM"`` naming
the order in which year, month, day, hour, minute and second appear in the
text.  Parsing is separator-agnostic: digits are extracted as maximal runs and
assigned to the order's components left to right, so ``"2004-10-01 01:00:00"``
and ``"2004/10/01T01.00.00"`` parse identically under ``"ymdHMS"``.

Instants are plain integers: seconds since the Unix epoch, UTC.  There is no
timezone or DST modeling and no sub-second precision.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import (
    BadTimeOrder,
    DuplicateComponent,
    FieldCountMismatch,
    MissingDateComponent,
    NoOrderParsesAnything,
    OutOfRangeField,
    UnknownComponent,
)

Instant = int

_DATE_COMPONENTS = ("y", "m", "d")
_TIME_COMPONENTS = ("H", "M", "S")

_DIGIT_RUNS = re.compile(r"\d+")


@dataclass(frozen=True)
class FormatOrder:
    """Ordered component list for one timestamp layout."""

    components: tuple[str, ...]
    spec: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.spec


def parse_format_order(spec: str) -> FormatOrder:
    """Validate a compact format spec like ``"ymdHMS"``.

    A trailing/lowercase ``s`` is accepted as an alias for ``S``.  All three
    date components must be present; time components are optional but must
    form an H, M, S prefix in that relative order (no minutes without hours,
    no seconds without minutes).

    Raises
    ------
    UnknownComponent, DuplicateComponent, MissingDateComponent, BadTimeOrder
    """
    if not spec:
        raise UnknownComponent("empty format spec")
    components: list[str] = []
    for ch in spec:
        comp = "S" if ch == "s" else ch
        if comp not in _DATE_COMPONENTS + _TIME_COMPONENTS:
            raise UnknownComponent(f"unknown format component {ch!r} in {spec!r}")
        if comp in components:
            raise DuplicateComponent(f"component {comp!r} repeated in {spec!r}")
        components.append(comp)
    for comp in _DATE_COMPONENTS:
        if comp not in components:
            raise MissingDateComponent(f"format {spec!r} lacks {comp!r}")
    present = [c for c in components if c in _TIME_COMPONENTS]
    if present != list(_TIME_COMPONENTS[: len(present)]):
        raise BadTimeOrder(
            f"time components must appear as H, then M, then S; got {spec!r}"
        )
    return FormatOrder(components=tuple(components), spec=spec)


def _resolve_year(run: str) -> int:
    # Two-digit years pivot at 69: 00-68 -> 2000-2068, 69-99 -> 1969-1999.
    value = int(run)
    if len(run) <= 2:
        return 2000 + value if value <= 68 else 1900 + value
    return value


def parse_timestamp(text: str, order: FormatOrder) -> Instant:
    """Parse one timestamp string into UTC seconds since the epoch.

    Digit runs are matched positionally against ``order.components``; any
    unassigned trailing components must be time components, which default
    to zero (so ``"31/12/2016 23:00"`` parses under ``"dmyHMS"``).

    Raises
    ------
    FieldCountMismatch
        Too many digit runs, or too few to cover the date components.
    OutOfRangeField
        Assembled fields are not a valid calendar time.
    """
    runs = _DIGIT_RUNS.findall(text)
    comps = order.components
    if len(runs) > len(comps):
        raise FieldCountMismatch(
            f"{text!r} has {len(runs)} fields; format {order.spec!r} takes "
            f"at most {len(comps)}"
        )
    unassigned = comps[len(runs):]
    if any(c in _DATE_COMPONENTS for c in unassigned):
        raise FieldCountMismatch(
            f"{text!r} has {len(runs)} fields; format {order.spec!r} needs "
            f"its date components"
        )
    fields = {"H": 0, "M": 0, "S": 0}
    for comp, run in zip(comps, runs):
        fields[comp] = _resolve_year(run) if comp == "y" else int(run)
    try:
        dt = datetime(
            fields["y"], fields["m"], fields["d"],
            fields["H"], fields["M"], fields["S"],
        )
    except ValueError as exc:
        raise OutOfRangeField(f"{text!r}: {exc}") from exc
    return calendar.timegm(dt.timetuple())


def parse_column(
    texts: list[str], orders: list[FormatOrder]
) -> tuple[list[Instant | None], FormatOrder, list[int]]:
    """Parse a whole column, choosing the order that parses the most rows.

    Ties break toward the earlier position in ``orders``.  Rows that fail the
    chosen order come back as ``None`` with their indices listed.

    Raises
    ------
    NoOrderParsesAnything
        If every order parses zero rows.
    """
    if not orders:
        raise NoOrderParsesAnything("no candidate format orders supplied")
    best: tuple[list[Instant | None], FormatOrder, list[int]] | None = None
    best_count = 0
    for order in orders:
        instants: list[Instant | None] = []
        failures: list[int] = []
        for i, text in enumerate(texts):
            try:
                instants.append(parse_timestamp(text, order))
            except (FieldCountMismatch, OutOfRangeField):
                instants.append(None)
                failures.append(i)
        count = len(texts) - len(failures)
        if count > best_count:
            best = (instants, order, failures)
            best_count = count
    if best is None:
        raise NoOrderParsesAnything(
            f"none of {[o.spec for o in orders]} parses any of {len(texts)} rows"
        )
    return best


def render_instant(instant: Instant) -> str:
    """ISO-8601 UTC rendering, e.g. ``"2004-10-01T01:00:00Z"``."""
    return datetime.fromtimestamp(instant, tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )


def parse_iso_instant(text: str) -> Instant:
    """Inverse of :func:`render_instant`."""
    dt = datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ")
    return calendar.timegm(dt.timetuple())


def format_in_order(instant: Instant, order: FormatOrder, sep: str = "-") -> str:
    """Render an instant as digit fields in ``order``'s component sequence.

    Inverse of :func:`parse_timestamp` for any order; used by tests and by
    fixtures that need non-ISO layouts.  Years render with 4 digits, all
    other fields with 2.
    """
    dt = datetime.fromtimestamp(instant, tz=timezone.utc)
    values = {
        "y": f"{dt.year:04d}", "m": f"{dt.month:02d}", "d": f"{dt.day:02d}",
        "H": f"{dt.hour:02d}", "M": f"{dt.minute:02d}", "S": f"{dt.second:02d}",
    }
    return sep.join(values[c] for c in order.components)
