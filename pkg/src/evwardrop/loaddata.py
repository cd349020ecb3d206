"""Hourly household-consumption ingestion and slot-level price audits.

A year of hourly energy values is reduced, day by day, to ``T`` slots by
sorting the 24 hourly values ascending and summing contiguous blocks
(off-peak hours need not be adjacent in clock time, so chronology is
deliberately discarded; a chronological mode exists for sensitivity
studies).  Each day's slot profile is then tested for unit-price
monotonicity and the verdicts are averaged per calendar month.
"""

from __future__ import annotations

import csv
import datetime as _dt
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .charging import ChargingScenario, is_price_increasing
from .network import InputError

__all__ = [
    "LoadDataset",
    "SlotProfile",
    "parse_load_csv",
    "aggregate_day_to_slots",
    "monthly_increasing_fraction",
    "MonthlyFraction",
]

_WIDE_HEADER = ["date"] + [f"h{i}" for i in range(24)]
_LONG_HEADER = ["date", "hour", "kwh"]


@dataclass(frozen=True)
class LoadDataset:
    """Ordered daily records of 24 hourly energy values (kWh)."""

    days: tuple[tuple[_dt.date, tuple[float, ...]], ...]

    def __post_init__(self):
        prev = None
        for date, values in self.days:
            if len(values) != 24:
                raise InputError(f"{date}: day must have exactly 24 values")
            if any(v < 0 or not math.isfinite(v) for v in values):
                raise InputError(f"{date}: negative or non-finite energy value")
            if prev is not None and date <= prev:
                raise InputError(f"{date}: dates must be strictly increasing")
            prev = date

    def __len__(self) -> int:
        return len(self.days)


@dataclass(frozen=True)
class SlotProfile:
    """Energy per slot for one day; sums match the source hours."""

    T: int
    slots: tuple[float, ...]


@dataclass(frozen=True)
class MonthlyFraction:
    month: str            # "YYYY-MM"
    T: int
    fraction: float
    days_counted: int
    zero_days: int        # flat-zero days, counted as increasing


def _parse_date(text: str, row: int) -> _dt.date:
    try:
        return _dt.date.fromisoformat(text.strip())
    except ValueError:
        raise InputError(f"row {row}: cannot parse date {text!r}") from None


def _parse_kwh(text: str, row: int, what: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise InputError(f"row {row}: {what} is not a number: {text!r}") from None
    if v < 0 or not math.isfinite(v):
        raise InputError(f"row {row}: {what} must be finite and >= 0, got {v}")
    return v


def parse_load_csv(path) -> LoadDataset:
    """Read a load file in wide (``date,h0..h23``) or long format.

    Long format is ``date,hour,kwh`` with every day needing all 24
    hours.  Errors carry the offending row number; duplicate dates,
    missing hours and negative values are rejected.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [c.strip().lower() for c in rows[0]]
    if header == _WIDE_HEADER:
        return _parse_wide(rows[1:])
    if header == _LONG_HEADER:
        return _parse_long(rows[1:])
    raise InputError(
        f"{path}: unrecognized header {rows[0]!r}; expected "
        f"'date,h0,...,h23' or 'date,hour,kwh'"
    )


def _parse_wide(rows: Sequence[Sequence[str]]) -> LoadDataset:
    days = []
    seen: set[_dt.date] = set()
    for i, row in enumerate(rows, start=2):
        if len(row) != 25:
            date_txt = row[0] if row else "?"
            raise InputError(
                f"row {i} ({date_txt}): expected 24 hourly values, got {len(row) - 1}"
            )
        date = _parse_date(row[0], i)
        if date in seen:
            raise InputError(f"row {i}: duplicate date {date}")
        seen.add(date)
        values = tuple(
            _parse_kwh(row[1 + h], i, f"hour {h}") for h in range(24)
        )
        days.append((date, values))
    days.sort(key=lambda d: d[0])
    return LoadDataset(days=tuple(days))


def _parse_long(rows: Sequence[Sequence[str]]) -> LoadDataset:
    by_date: dict[_dt.date, dict[int, float]] = {}
    first_row: dict[_dt.date, int] = {}
    for i, row in enumerate(rows, start=2):
        if len(row) != 3:
            raise InputError(f"row {i}: expected 'date,hour,kwh', got {len(row)} fields")
        date = _parse_date(row[0], i)
        try:
            hour = int(row[1])
        except ValueError:
            raise InputError(f"row {i}: hour is not an integer: {row[1]!r}") from None
        if not 0 <= hour <= 23:
            raise InputError(f"row {i}: hour must be in 0..23, got {hour}")
        v = _parse_kwh(row[2], i, "kwh")
        slots = by_date.setdefault(date, {})
        if hour in slots:
            raise InputError(f"row {i}: duplicate hour {hour} for {date}")
        slots[hour] = v
        first_row.setdefault(date, i)
    days = []
    for date in sorted(by_date):
        hours = by_date[date]
        if len(hours) != 24:
            missing = sorted(set(range(24)) - set(hours))
            raise InputError(
                f"row {first_row[date]} ({date}): missing hour(s) {missing}"
            )
        days.append((date, tuple(hours[h] for h in range(24))))
    return LoadDataset(days=tuple(days))


def aggregate_day_to_slots(
    day: Sequence[float], T: int, chronological: bool = False
) -> SlotProfile:
    """Reduce 24 hourly values to ``T`` slot energies.

    Default mode sorts the hours ascending first, so a slot collects
    hours of similar magnitude regardless of clock position.  Block
    sizes are ``floor(24/T)`` with the first ``24 mod T`` blocks taking
    one extra hour.  ``chronological=True`` keeps clock order instead.
    """
    if not 1 <= T <= 24:
        raise InputError(f"T must be in 1..24, got {T}")
    values = [float(v) for v in day]
    if len(values) != 24:
        raise InputError(f"day must have exactly 24 values, got {len(values)}")
    if any(v < 0 or not math.isfinite(v) for v in values):
        raise InputError("hourly values must be finite and >= 0")
    if not chronological:
        values = sorted(values)
    base, extra = divmod(24, T)
    slots = []
    pos = 0
    for t in range(T):
        size = base + (1 if t < extra else 0)
        slots.append(math.fsum(values[pos : pos + size]))
        pos += size
    return SlotProfile(T=T, slots=tuple(slots))


def _uniform_eta(T: int) -> tuple[float, ...]:
    return (0.01,) * T


def monthly_increasing_fraction(
    ds: LoadDataset,
    T: int,
    n: float = 2.0,
    eta_policy=None,
    chronological: bool = False,
) -> list[MonthlyFraction]:
    """Share of days per month whose unit price is increasing.

    Each day is aggregated to ``T`` slots and run through the
    monotonicity criterion; verdicts are averaged per calendar month.
    ``eta_policy`` maps a slot count to the per-slot cost coefficients
    (default: uniform, under which the criterion is scale invariant).
    Days with zero total consumption count as increasing and are
    reported separately.  Months with no data are omitted, not zero.
    """
    eta_policy = eta_policy or _uniform_eta
    months: dict[str, list[bool]] = {}
    zero_days: dict[str, int] = {}
    eta = tuple(eta_policy(T))
    for date, values in ds.days:
        key = f"{date.year:04d}-{date.month:02d}"
        profile = aggregate_day_to_slots(values, T, chronological=chronological)
        if sum(profile.slots) <= 0.0:
            months.setdefault(key, []).append(True)
            zero_days[key] = zero_days.get(key, 0) + 1
            continue
        sc = ChargingScenario(n=n, eta=eta, ell0=profile.slots)
        months.setdefault(key, []).append(is_price_increasing(sc).increasing)
    out = []
    for key in sorted(months):
        verdicts = months[key]
        out.append(
            MonthlyFraction(
                month=key,
                T=T,
                fraction=float(np.mean([1.0 if v else 0.0 for v in verdicts])),
                days_counted=len(verdicts),
                zero_days=zero_days.get(key, 0),
            )
        )
    return out
