"""Closed-form scheduling of an aggregated charging need over time slots.

An aggregator receives a total flexible energy demand ``L_e`` (kWh) and
spreads it over ``T`` time slots so that the total generation cost
``sum_t eta_t * (ell0_t + ell_e_t)**n`` is minimal, where ``ell0_t`` is the
nonflexible consumption already sitting in slot ``t``.  The optimum has a
water-filling structure: slots are filled in order of marginal cost at
their nonflexible load, and all active slots share one marginal cost.

Everything here is closed form: activation thresholds on ``L_e``, the
optimal schedule, the optimal cost, the resulting average unit price
(total cost divided by total energy) and a monotonicity test for that
unit price.  All energies are kWh, all costs EUR, ``eta`` is EUR/kWh^n.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ChargingScenario",
    "ChargingSchedule",
    "PriceMonotonicity",
    "order_slots",
    "energy_thresholds",
    "schedule_charging",
    "optimal_cost",
    "charging_unit_price",
    "unit_price_curve",
    "is_price_increasing",
    "price_derivative_sign_scan",
    "marginal_cost",
    "lambda_integral",
    "kkt_residual",
]


@dataclass(frozen=True)
class ChargingScenario:
    """Immutable description of one scheduling problem.

    Parameters
    ----------
    n : float
        Cost exponent, ``n >= 2``.
    eta : tuple of float
        Per-slot cost coefficients (EUR/kWh^n), all strictly positive.
    ell0 : tuple of float
        Per-slot nonflexible loads (kWh), all nonnegative.

    ``T = 1`` is accepted even though the scheduling problem is only
    interesting from two slots on; the formulas degenerate cleanly.
    """

    n: float
    eta: tuple[float, ...]
    ell0: tuple[float, ...]

    def __init__(self, n: float, eta: Iterable[float], ell0: Iterable[float]):
        eta_t = tuple(float(v) for v in eta)
        ell0_t = tuple(float(v) for v in ell0)
        if not eta_t:
            raise ValueError("scenario needs at least one time slot")
        if len(eta_t) != len(ell0_t):
            raise ValueError(
                f"eta has {len(eta_t)} slots but ell0 has {len(ell0_t)}"
            )
        if float(n) < 2.0:
            raise ValueError(f"cost exponent must be >= 2, got {n}")
        if any(v <= 0.0 or not math.isfinite(v) for v in eta_t):
            raise ValueError("all eta coefficients must be finite and > 0")
        if any(v < 0.0 or not math.isfinite(v) for v in ell0_t):
            raise ValueError("all nonflexible loads must be finite and >= 0")
        object.__setattr__(self, "n", float(n))
        object.__setattr__(self, "eta", eta_t)
        object.__setattr__(self, "ell0", ell0_t)

    @property
    def T(self) -> int:
        return len(self.eta)

    @property
    def total_nonflexible(self) -> float:
        """Sum of the nonflexible loads (kWh)."""
        return float(sum(self.ell0))


@dataclass(frozen=True)
class ChargingSchedule:
    """Optimal schedule for one charging need, in original slot order."""

    ell_e: tuple[float, ...]
    value: float
    unit_price: float
    active_slot_count: int


@dataclass(frozen=True)
class PriceMonotonicity:
    """Outcome of the unit-price monotonicity test.

    ``ratio`` is the normalized load statistic compared against the cost
    exponent ``n``; the unit price is increasing on (0, inf) iff
    ``ratio <= n``.  ``degenerate_normalization`` is set when the
    cheapest slot has zero nonflexible load while others do not: the
    test is then stated outside its supported regime and the ratio uses
    the smallest strictly positive load instead.
    """

    increasing: bool
    ratio: float
    degenerate_normalization: bool = False


class _SortedScenario:
    """Slot data in marginal-cost order plus the prefix quantities.

    ``alpha[t]`` is the cumulative nonflexible load of the first ``t``
    sorted slots, ``beta[t]`` the cost of the remaining slots at their
    nonflexible load, ``S[t] = sum_{s<=t} eta_s**(-1/(n-1))`` and
    ``thresholds[t-1]`` the charging need at which sorted slot ``t+1``
    becomes active (entry ``T-1`` is ``+inf``).
    """

    def __init__(self, sc: ChargingScenario):
        n = sc.n
        eta = np.asarray(sc.eta, dtype=float)
        ell0 = np.asarray(sc.ell0, dtype=float)
        marg = n * eta * ell0 ** (n - 1.0)
        order = np.argsort(marg, kind="stable")
        eta_s = eta[order]
        ell0_s = ell0[order]
        T = len(eta_s)

        self.n = n
        self.order = order
        self.eta_s = eta_s
        self.ell0_s = ell0_s
        # alpha[0] = 0 so alpha[t] is "cumulative load up to slot t".
        self.alpha = np.concatenate(([0.0], np.cumsum(ell0_s)))
        base_costs = eta_s * ell0_s**n
        self.beta = np.concatenate((np.cumsum(base_costs[::-1])[::-1], [0.0]))
        self.S = np.cumsum(eta_s ** (-1.0 / (n - 1.0)))
        self.total = float(self.alpha[T])

        # threshold t (1-based) is the need at which sorted slot t+1 activates
        thr = np.empty(T)
        for t in range(1, T):
            w = (eta_s[t] / eta_s[:t]) ** (1.0 / (n - 1.0))
            thr[t - 1] = float(np.sum(w) * ell0_s[t] - self.alpha[t])
        thr[T - 1] = math.inf
        self.thresholds = thr
        # plain-python copies for the scalar fast path
        self._thr_list = [float(v) for v in thr]
        self._coef_list = [0.0] + [
            float(self.S[t] ** (-(n - 1.0))) for t in range(T)
        ]
        self._alpha_list = [float(v) for v in self.alpha]
        self._beta_list = [float(v) for v in self.beta]

    def value_scalar(self, L: float) -> float:
        """Pure-python optimal cost for one charging need (hot path)."""
        if L <= 0.0:
            return self._beta_list[0]
        tbar = bisect_left(self._thr_list, L) + 1
        return (
            self._coef_list[tbar] * (L + self._alpha_list[tbar]) ** self.n
            + self._beta_list[tbar]
        )

    def unit_price_scalar(self, L: float) -> float:
        denom = L + self.total
        if denom <= 0.0:
            raise ValueError(
                "unit price undefined: no energy at all (L_e and nonflexible "
                "loads are all zero)"
            )
        return self.value_scalar(L) / denom

    def active_count(self, L_e) -> np.ndarray | int:
        """Number of active slots for each charging need (0 at L_e = 0)."""
        L = np.asarray(L_e, dtype=float)
        tbar = np.searchsorted(self.thresholds, L, side="left") + 1
        tbar = np.where(L <= 0.0, 0, tbar)
        return tbar if L.ndim else int(tbar)

    def value(self, L_e) -> np.ndarray | float:
        """Optimal total cost for each charging need (vectorized)."""
        L = np.asarray(L_e, dtype=float)
        tbar = np.searchsorted(self.thresholds, L, side="left") + 1
        n = self.n
        coef = self.S[tbar - 1] ** (-(n - 1.0))
        out = coef * (L + self.alpha[tbar]) ** n + self.beta[tbar]
        zero_val = self.beta[0]
        out = np.where(L <= 0.0, zero_val, out)
        return out if L.ndim else float(out)

    def unit_price(self, L_e) -> np.ndarray | float:
        L = np.asarray(L_e, dtype=float)
        denom = L + self.total
        if np.any(denom <= 0.0):
            raise ValueError(
                "unit price undefined: no energy at all (L_e and nonflexible "
                "loads are all zero)"
            )
        out = self.value(L) / denom
        return out if L.ndim else float(out)


@lru_cache(maxsize=256)
def _sorted_view(sc: ChargingScenario) -> _SortedScenario:
    return _SortedScenario(sc)


def order_slots(sc: ChargingScenario) -> list[int]:
    """Permutation sorting slots by marginal cost at the nonflexible load.

    Slot ``t`` is ranked by ``n * eta_t * ell0_t**(n-1)``; ties keep the
    original index order so downstream results are deterministic.
    """
    return [int(i) for i in _sorted_view(sc).order]


def energy_thresholds(sc: ChargingScenario) -> np.ndarray:
    """Charging needs at which successive slots become active.

    Returns an array of length ``T`` where entry ``t-1`` (1-based ``t``)
    is the need at which sorted slot ``t+1`` first receives energy; the
    last entry is ``+inf``.  The sequence is nondecreasing.
    """
    return _sorted_view(sc).thresholds.copy()


def marginal_cost(sc: ChargingScenario, slot: int, load: float) -> float:
    """d/dload of the slot cost ``eta * load**n`` at the given total load."""
    return sc.n * sc.eta[slot] * float(load) ** (sc.n - 1.0)


def schedule_charging(sc: ChargingScenario, L_e: float) -> ChargingSchedule:
    """Optimal split of a charging need over the slots.

    The active slots (the cheapest ``active_slot_count`` in marginal-cost
    order) end up sharing one marginal cost; every other slot stays
    untouched.  The returned per-slot energies follow the scenario's
    original slot order.
    """
    L = float(L_e)
    if not math.isfinite(L) or L < 0.0:
        raise ValueError(f"charging need must be finite and >= 0, got {L_e}")
    view = _sorted_view(sc)
    T = sc.T
    ell = np.zeros(T)
    if L > 0.0:
        tbar = int(np.searchsorted(view.thresholds, L, side="left")) + 1
        # Common level c makes slot loads c * eta**(-1/(n-1)) sum to L + alpha.
        c = (L + view.alpha[tbar]) / view.S[tbar - 1]
        loads = c * view.eta_s[:tbar] ** (-1.0 / (sc.n - 1.0))
        ell[:tbar] = np.maximum(loads - view.ell0_s[:tbar], 0.0)
        # The analytic split can carry rounding at interval ends; restore
        # the mass balance exactly on the last active slot.
        ell[tbar - 1] += L - ell.sum()
    else:
        tbar = 0
    value = float(view.value(L))
    price = float(view.unit_price(L)) if (L + view.total) > 0.0 else math.nan
    out = np.zeros(T)
    out[view.order] = ell
    return ChargingSchedule(
        ell_e=tuple(float(v) for v in out),
        value=value,
        unit_price=price,
        active_slot_count=tbar,
    )


def optimal_cost(sc: ChargingScenario, L_e: float) -> float:
    """Minimal total cost (EUR) of serving nonflexible load plus ``L_e``."""
    L = float(L_e)
    if not math.isfinite(L) or L < 0.0:
        raise ValueError(f"charging need must be finite and >= 0, got {L_e}")
    return float(_sorted_view(sc).value(L))


def charging_unit_price(sc: ChargingScenario, L_e: float) -> float:
    """Average cost per kWh of the total consumption at need ``L_e``.

    This is ``optimal_cost(sc, L_e) / (L_e + sum(ell0))``: flexible and
    nonflexible energy pay the same per-unit price.  Undefined (raises)
    when there is no energy at all.
    """
    L = float(L_e)
    if not math.isfinite(L) or L < 0.0:
        raise ValueError(f"charging need must be finite and >= 0, got {L_e}")
    return float(_sorted_view(sc).unit_price(L))


def unit_price_curve(sc: ChargingScenario, L_values: Sequence[float]) -> np.ndarray:
    """Vectorized ``charging_unit_price`` over an array of needs."""
    L = np.asarray(L_values, dtype=float)
    if np.any(~np.isfinite(L)) or np.any(L < 0.0):
        raise ValueError("charging needs must be finite and >= 0")
    return np.asarray(_sorted_view(sc).unit_price(L), dtype=float)


def is_price_increasing(sc: ChargingScenario) -> PriceMonotonicity:
    """Test whether the unit price is increasing for every positive need.

    The criterion compares a normalized statistic of the nonflexible
    profile with the cost exponent: with slots in marginal-cost order and
    loads and coefficients normalized by slot 1,
    ``sum_t eta~_t * ell0~_t**n / sum_t ell0~_t <= n``.

    An all-zero nonflexible profile is unconditionally increasing.  When
    slot 1 has zero load but others do not, the statistic is computed
    against the smallest strictly positive load and the result is
    flagged ``degenerate_normalization``.
    """
    view = _sorted_view(sc)
    n = sc.n
    total = view.total
    if total <= 0.0:
        return PriceMonotonicity(increasing=True, ratio=0.0)
    ref_idx = 0
    degenerate = False
    if view.ell0_s[0] <= 0.0:
        ref_idx = int(np.argmax(view.ell0_s > 0.0))
        degenerate = True
    eta_ref = view.eta_s[ref_idx]
    ell_ref = view.ell0_s[ref_idx]
    # Unnormalized form of the same comparison, safe against tiny ell_ref.
    num = float(np.sum(view.eta_s * view.ell0_s**n))
    den = float(eta_ref * ell_ref ** (n - 1.0) * total)
    ratio = num / den
    return PriceMonotonicity(
        increasing=bool(ratio <= n),
        ratio=ratio,
        degenerate_normalization=degenerate,
    )


def price_derivative_sign_scan(
    sc: ChargingScenario, L_max: float, grid_points: int
) -> list[tuple[float, int]]:
    """Signs of the unit-price slope on a uniform grid of charging needs.

    Central differences with half-grid spacing; a slope whose magnitude
    is below ``1e-12`` times the local price scale counts as zero.  Used
    to corroborate :func:`is_price_increasing` numerically.
    """
    if L_max <= 0.0:
        raise ValueError("L_max must be > 0")
    if grid_points < 2:
        raise ValueError("need at least two grid points")
    view = _sorted_view(sc)
    grid = np.linspace(L_max / grid_points, L_max, grid_points)
    h = 0.5 * (grid[1] - grid[0])
    lo = np.maximum(grid - h, 0.0)
    hi = grid + h
    diff = np.asarray(view.unit_price(hi)) - np.asarray(view.unit_price(lo))
    scale = np.maximum(np.abs(np.asarray(view.unit_price(grid))), 1.0)
    signs = np.where(np.abs(diff) <= 1e-12 * scale, 0, np.sign(diff))
    return [(float(L), int(s)) for L, s in zip(grid, signs)]


def lambda_integral(sc: ChargingScenario, L_e: float) -> float:
    """Closed-form ``integral_0^L`` of the unit price (EUR).

    Piecewise over the activation intervals: on each piece the price is
    ``(K (u + a)**n + b) / (u + A)`` whose antiderivative is elementary
    for integer exponents.  Non-integer exponents fall back to adaptive
    quadrature (absolute tolerance 1e-12).
    """
    L = float(L_e)
    if not math.isfinite(L) or L < 0.0:
        raise ValueError(f"charging need must be finite and >= 0, got {L_e}")
    if L == 0.0:
        return 0.0
    view = _sorted_view(sc)
    n = sc.n
    if float(n).is_integer():
        return _lambda_integral_closed(view, int(n), L)
    return _lambda_integral_quad(sc, L)


def _lambda_integral_closed(view: _SortedScenario, n: int, L: float) -> float:
    A = view.total
    T = len(view.eta_s)
    total = 0.0
    lo = 0.0
    for t in range(1, T + 1):
        hi = min(L, view.thresholds[t - 1]) if t < T else L
        if hi <= lo:
            continue
        K = view.S[t - 1] ** (-(n - 1.0))
        a_t = view.alpha[t]
        b_t = view.beta[t]
        D = A - a_t
        total += K * (_poly_over_v_antideriv(n, D, hi + A) - _poly_over_v_antideriv(n, D, lo + A))
        if b_t != 0.0:
            total += b_t * (math.log(hi + A) - math.log(lo + A))
        lo = hi
        if lo >= L:
            break
    return total


def _poly_over_v_antideriv(n: int, D: float, v: float) -> float:
    """Antiderivative of (v - D)**n / v, evaluated at v (> 0)."""
    acc = 0.0
    for j in range(1, n + 1):
        acc += math.comb(n, j) * (-D) ** (n - j) * v**j / j
    c0 = (-D) ** n
    if c0 != 0.0:
        acc += c0 * math.log(v)
    return acc


def _lambda_integral_quad(sc: ChargingScenario, L: float) -> float:
    from scipy.integrate import quad

    view = _sorted_view(sc)
    pts = [t for t in view.thresholds[:-1] if 0.0 < t < L]
    val, _ = quad(
        lambda u: view.unit_price(u),
        0.0,
        L,
        points=pts or None,
        epsabs=1e-12,
        epsrel=1e-12,
        limit=200,
    )
    return float(val)


def kkt_residual(sc: ChargingScenario, schedule: ChargingSchedule, L_e: float) -> float:
    """Worst violation of the optimality conditions of a schedule.

    Active slots must share one marginal cost; inactive slots must not be
    cheaper at the margin.  Returns the largest violation relative to the
    common marginal cost (0 for an exact optimum).
    """
    ell = np.asarray(schedule.ell_e, dtype=float)
    eta = np.asarray(sc.eta, dtype=float)
    ell0 = np.asarray(sc.ell0, dtype=float)
    marg = sc.n * eta * (ell0 + ell) ** (sc.n - 1.0)
    active = ell > 1e-12 * max(1.0, float(L_e))
    if not np.any(active):
        return 0.0
    mu = float(np.max(marg[active]))
    scale = max(mu, 1e-300)
    spread = float(np.max(marg[active]) - np.min(marg[active])) / scale
    under = float(max(0.0, np.max(mu - marg[~active]) if np.any(~active) else 0.0)) / scale
    return max(spread, under)
