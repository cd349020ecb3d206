"""Upper-level evaluation: environmental cost, toll search and sweeps.

A network operator can put a toll on the gasoline class of one arc and
re-solve the equilibrium for every candidate value; the objective is an
environmental cost that counts the expected number of gasoline vehicles
on each arc (flow times travel time, optionally weighted).  Sweeps over
the fuel price and over the electric-fleet share rerun the equilibrium
per grid point; grid points are independent and can fan out over
processes (``EVW_THREADS``) with a deterministic, order-independent
reduction.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .charging import ChargingScenario
from .equilibrium import (
    EquilibriumConfig,
    EquilibriumResult,
    SolverError,
    solve_equilibrium,
)
from .network import GV, ClassParams, InputError, RoadNetwork, travel_time

__all__ = [
    "EnvWeights",
    "TollSweepResult",
    "environmental_cost",
    "optimize_toll",
    "sweep_fuel_price",
    "sweep_ev_penetration",
    "thread_budget",
]


@dataclass(frozen=True)
class EnvWeights:
    """Per-arc weights of the environmental objective (>= 1, default 1)."""

    weights: dict[str, float]

    def __init__(self, weights: dict[str, float] | None = None):
        w = {str(k): float(v) for k, v in (weights or {}).items()}
        for arc_id, v in w.items():
            if v < 1.0:
                raise InputError(f"environmental weight on {arc_id} must be >= 1")
        object.__setattr__(self, "weights", w)

    def weight(self, arc_id: str) -> float:
        return self.weights.get(arc_id, 1.0)


@dataclass(frozen=True)
class TollSweepResult:
    toll_grid: tuple[float, ...]
    env_costs: tuple[float, ...]
    best_toll: float
    best_cost: float
    gain: float
    tolled_arc: str
    results: tuple[EquilibriumResult, ...] | None = None


def environmental_cost(
    net: RoadNetwork, flows, weights: EnvWeights | None = None
) -> float:
    """Weighted expected gasoline-vehicle count: sum_a w_a x_{a,g} d_a(x_a)."""
    weights = weights or EnvWeights()
    totals = flows.totals
    gv = flows.class_vector(GV)
    acc = 0.0
    for i, arc in enumerate(net.arcs):
        acc += weights.weight(arc.id) * gv[i] * travel_time(arc, float(totals[i]))
    return float(acc)


def thread_budget() -> int:
    """Worker count from ``EVW_THREADS`` (0 or unset means sequential)."""
    raw = os.environ.get("EVW_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"EVW_THREADS must be an integer, got {raw!r}")
    return max(n, 0)


def _solve_one_toll(args) -> tuple[float, EquilibriumResult]:
    net, params, sc, cfg, arc_id, toll = args
    tolled = net.with_toll(arc_id, GV, toll)
    try:
        res = solve_equilibrium(tolled, params, sc, cfg)
    except SolverError as exc:
        raise SolverError(
            f"toll {toll:.2f} EUR on {arc_id}: {exc}", exc.result
        ) from exc
    return toll, res


def optimize_toll(
    net: RoadNetwork,
    params: ClassParams,
    sc: ChargingScenario,
    weights: EnvWeights | None = None,
    tolled_arc: str = "a",
    toll_max: float = 5.0,
    increment: float = 0.01,
    cfg: EquilibriumConfig | None = None,
    keep_results: bool = False,
    workers: int | None = None,
) -> TollSweepResult:
    """Exhaustive search of the gasoline toll on one arc.

    Re-solves the equilibrium for every toll in ``{0, increment, ...,
    toll_max}`` and returns the grid, the environmental cost curve, the
    minimizing toll (ties go to the smallest toll) and the relative gain
    over the untolled reference point.  Sequential runs warm-start each
    solve from the previous grid point; parallel runs solve each point
    independently, producing the same values.  ``workers=None`` reads
    ``EVW_THREADS``.
    """
    if increment <= 0:
        raise InputError("toll increment must be > 0")
    net.arc_index(tolled_arc)
    weights = weights or EnvWeights()
    cfg = cfg or EquilibriumConfig()
    n_steps = int(math.floor(toll_max / increment + 1e-9))
    grid = [round(i * increment, 10) for i in range(n_steps + 1)]

    results: list[EquilibriumResult] = [None] * len(grid)  # type: ignore
    if workers is None:
        workers = thread_budget()
    if workers >= 2:
        jobs = [(net, params, sc, cfg, tolled_arc, toll) for toll in grid]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, (_, res) in enumerate(pool.map(_solve_one_toll, jobs)):
                results[i] = res
    else:
        warm = None
        for i, toll in enumerate(grid):
            tolled = net.with_toll(tolled_arc, GV, toll)
            try:
                res = solve_equilibrium(
                    tolled, params, sc, cfg, initial_path_flows=warm
                )
            except SolverError as exc:
                raise SolverError(
                    f"toll {toll:.2f} EUR on {tolled_arc}: {exc}", exc.result
                ) from exc
            results[i] = res
            warm = res.flows.path_flows

    costs = [environmental_cost(net, r.flows, weights) for r in results]
    best_idx = min(range(len(grid)), key=lambda i: (costs[i], grid[i]))
    ref = costs[0]
    best = costs[best_idx]
    gain = abs(best - ref) / ref if ref > 0 else 0.0
    return TollSweepResult(
        toll_grid=tuple(grid),
        env_costs=tuple(costs),
        best_toll=float(grid[best_idx]),
        best_cost=float(best),
        gain=float(gain),
        tolled_arc=tolled_arc,
        results=tuple(results) if keep_results else None,
    )


def _solve_one_fuel(args) -> EquilibriumResult:
    net, params, sc, cfg, lam_g = args
    p = replace(params, lambda_g=lam_g)
    try:
        return solve_equilibrium(net, p, sc, cfg)
    except SolverError as exc:
        raise SolverError(f"fuel price {lam_g:.4f} EUR/L: {exc}", exc.result) from exc


def sweep_fuel_price(
    net: RoadNetwork,
    params: ClassParams,
    sc: ChargingScenario,
    lambda_g_grid,
    cfg: EquilibriumConfig | None = None,
) -> list[EquilibriumResult]:
    """Equilibria for a list of fuel prices (EUR/L), in grid order."""
    grid = [float(v) for v in lambda_g_grid]
    if any(v <= 0 for v in grid):
        raise InputError("fuel prices must be > 0")
    cfg = cfg or EquilibriumConfig()
    workers = thread_budget()
    if workers >= 2:
        jobs = [(net, params, sc, cfg, v) for v in grid]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_solve_one_fuel, jobs))
    out = []
    warm = None
    for v in grid:
        p = replace(params, lambda_g=v)
        try:
            res = solve_equilibrium(net, p, sc, cfg, initial_path_flows=warm)
        except SolverError as exc:
            raise SolverError(f"fuel price {v:.4f} EUR/L: {exc}", exc.result) from exc
        out.append(res)
        warm = res.flows.path_flows
    return out


def _solve_one_penetration(args):
    net, params, sc, weights, x_e, tolled_arc, toll_max, increment, cfg = args
    p = replace(params, x_e=x_e)
    # inner toll search stays sequential; parallelism lives at this level
    sweep = optimize_toll(
        net, p, sc, weights, tolled_arc, toll_max, increment, cfg,
        keep_results=True, workers=0,
    )
    best_idx = sweep.toll_grid.index(sweep.best_toll)
    return x_e, sweep.best_toll, sweep.gain, sweep.results[best_idx]


def sweep_ev_penetration(
    net: RoadNetwork,
    params: ClassParams,
    sc: ChargingScenario,
    weights: EnvWeights | None = None,
    x_e_grid=(0.05, 0.95, 0.05),
    tolled_arc: str = "a",
    toll_max: float = 5.0,
    increment: float = 0.01,
    cfg: EquilibriumConfig | None = None,
) -> list[dict]:
    """Optimal toll and gain per electric-fleet share.

    ``x_e_grid`` is an explicit iterable of shares in [0, 1].  Each entry
    reruns the full toll search; the result rows carry the optimal toll,
    the relative gain and the equilibrium composition at the optimum.
    Fans out over processes when ``EVW_THREADS >= 2`` (one worker per
    share; the inner toll search stays sequential in each worker).
    """
    shares = [float(v) for v in x_e_grid]
    if any(not 0.0 <= v <= 1.0 for v in shares):
        raise InputError("EV shares must lie in [0, 1]")
    weights = weights or EnvWeights()
    cfg = cfg or EquilibriumConfig()
    jobs = [
        (net, params, sc, weights, v, tolled_arc, toll_max, increment, cfg)
        for v in shares
    ]
    workers = thread_budget()
    if workers >= 2:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_solve_one_penetration, jobs))
    else:
        rows = [_solve_one_penetration(j) for j in jobs]
    out = []
    for x_e, best_toll, gain, res in rows:
        out.append(
            {
                "x_e": x_e,
                "best_toll": best_toll,
                "gain": gain,
                "equilibrium": res,
            }
        )
    return out
