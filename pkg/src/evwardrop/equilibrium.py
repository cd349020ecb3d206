"""Wardrop equilibria of the coupled driving-and-charging game.

The equilibrium is the minimizer of a convex potential over the demand
polytope: congestion enters through the integral of the BPR delay,
tolls linearly, and the energy costs through the integral of each
class's unit price over its aggregated energy need.  The electric price
is endogenous (it depends on the fleet-wide charging need), which makes
the game nonseparable, but the potential's partial derivatives are still
exactly the per-vehicle generalized arc costs, so a conditional-gradient
scheme whose subproblem is a per-class shortest path computes the
equilibrium and certifies it with a duality gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .charging import ChargingScenario, charging_unit_price, lambda_integral
from .network import (
    CLASSES,
    EV,
    GV,
    ClassParams,
    FlowAssignment,
    InputError,
    RoadNetwork,
    shortest_path,
)
from . import charging

__all__ = [
    "EquilibriumConfig",
    "EquilibriumResult",
    "SolverError",
    "WardropCheck",
    "beckmann_potential",
    "beckmann_gradient",
    "solve_equilibrium",
    "verify_wardrop",
    "enumerate_parallel_equilibrium",
    "random_feasible_assignment",
]


@dataclass(frozen=True)
class EquilibriumConfig:
    gap_tolerance: float = 1e-6
    max_iterations: int = 100_000
    line_search_tolerance: float = 1e-10
    wardrop_epsilon: float = 1e-5

    def __post_init__(self):
        for name in (
            "gap_tolerance",
            "line_search_tolerance",
            "wardrop_epsilon",
        ):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be > 0")
        if self.max_iterations < 1:
            raise InputError("max_iterations must be >= 1")


@dataclass
class EquilibriumResult:
    flows: FlowAssignment
    charging_need: float
    unit_price: float
    potential: float
    relative_gap: float
    iterations: int
    wardrop_residual: float = math.nan
    certified: bool = False
    unique_regime: bool = True
    potential_history: tuple[float, ...] | None = None

    def summary(self) -> dict:
        return {
            "charging_need_kwh": self.charging_need,
            "unit_price_eur_per_kwh": self.unit_price,
            "potential": self.potential,
            "relative_gap": self.relative_gap,
            "iterations": self.iterations,
            "wardrop_residual": self.wardrop_residual,
            "certified": self.certified,
            "unique_regime": self.unique_regime,
        }


class SolverError(RuntimeError):
    """Raised when the solver stops before reaching the gap tolerance.

    Carries the last iterate so callers can inspect or persist it.
    """

    def __init__(self, message: str, result: EquilibriumResult):
        super().__init__(message)
        self.result = result


# -- potential and gradient --------------------------------------------------


class _SolveContext:
    """Per-solve cache of the frozen numeric data of one problem."""

    def __init__(self, net: RoadNetwork, params: ClassParams, sc: ChargingScenario):
        self.net = net
        self.params = params
        self.sc = sc
        self.lengths = net._lengths
        self.tolls = np.stack([net.toll_vector(cls) for cls in CLASSES], axis=1)
        self.rates = np.array([params.m_e, params.m_g])
        self.view = charging._sorted_view(sc)

    def price(self, cls_index: int, energy: float) -> float:
        if cls_index == 0:
            return self.view.unit_price_scalar(max(energy, 0.0))
        return self.params.lambda_g

    def potential(self, x: np.ndarray) -> float:
        params = self.params
        value = params.tau * self.net.congestion_integral(x.sum(axis=1))
        value += float(np.sum(self.tolls * x))
        energies = self.rates * params.fleet_scale * (x.T @ self.lengths)
        value += params.lambda_g * float(energies[1]) / params.fleet_scale
        value += lambda_integral(self.sc, float(energies[0])) / params.fleet_scale
        return float(value)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        params = self.params
        times = self.net.travel_times(x.sum(axis=1))
        energies = self.rates * params.fleet_scale * (x.T @ self.lengths)
        prices = np.array([self.price(0, float(energies[0])), params.lambda_g])
        return (
            params.tau * times[:, None]
            + self.tolls
            + self.lengths[:, None] * (self.rates * prices)[None, :]
        )

    def directional_derivative(self, x: np.ndarray, d: np.ndarray, gamma: float) -> float:
        return self.slope_function(x, d)(gamma)

    def slope_function(self, x: np.ndarray, d: np.ndarray):
        """Closure computing d/dgamma of the potential along x + gamma d.

        Precomputes per-arc constants so single evaluations stay cheap on
        small networks (the line search calls this tens of times).
        """
        params = self.params
        net = self.net
        tau = params.tau
        x_tot = x.sum(axis=1)
        d_tot = d.sum(axis=1)
        arcs = [
            (
                float(x_tot[i]),
                float(d_tot[i]),
                float(net._d0[i]),
                float(net._bpr_alpha[i]),
                float(net._bpr_beta[i]),
                float(net._capacity[i]),
            )
            for i in range(len(x_tot))
            if d_tot[i] != 0.0
        ]
        toll_term = float(np.sum(self.tolls * d))
        L_e0 = params.m_e * params.fleet_scale * float(np.dot(x[:, 0], self.lengths))
        dL_e = params.m_e * params.fleet_scale * float(np.dot(d[:, 0], self.lengths))
        gv_term = params.lambda_g * params.m_g * float(np.dot(d[:, 1], self.lengths))
        price = self.view.unit_price_scalar

        def slope(gamma: float) -> float:
            acc = toll_term + gv_term
            for xa, da, d0, al, be, cap in arcs:
                v = xa + gamma * da
                acc += tau * d0 * (1.0 + al * (v / cap) ** be) * da
            if dL_e != 0.0:
                L = L_e0 + gamma * dL_e
                acc += price(L if L > 0.0 else 0.0) * dL_e / params.fleet_scale
            return acc

        return slope


def _class_energies(
    net: RoadNetwork, flows: FlowAssignment, params: ClassParams
) -> dict[str, float]:
    lengths = net._lengths
    out = {}
    for cls in CLASSES:
        rate = params.consumption_rate(cls)
        out[cls] = float(
            rate * params.fleet_scale * np.dot(flows.class_vector(cls), lengths)
        )
    return out


def check_feasible(
    net: RoadNetwork,
    flows: FlowAssignment,
    params: ClassParams,
    tol: float = 1e-9,
) -> None:
    """Validate demand satisfaction when path flows are available.

    Arc-only assignments are accepted as-is (they cannot be checked
    against demands without a routing); path-backed assignments must
    aggregate consistently and meet every class demand.
    """
    if flows.path_flows is None:
        return
    agg = np.zeros_like(flows.matrix)
    met: dict[tuple[int, str], float] = {}
    od_by_endpoints = {
        (od.origin, od.destination): k for k, od in enumerate(net.od_pairs)
    }
    for (path, cls), f in flows.path_flows.items():
        j = CLASSES.index(cls)
        for arc_id in path:
            agg[net.arc_index(arc_id), j] += f
        first = net.arcs[net.arc_index(path[0])]
        last = net.arcs[net.arc_index(path[-1])]
        k = od_by_endpoints.get((first.tail, last.head))
        if k is not None:
            met[(k, cls)] = met.get((k, cls), 0.0) + f
    if not np.allclose(agg, flows.matrix, atol=tol, rtol=0.0):
        raise InputError("path flows do not aggregate to the stored arc flows")
    for k, od in enumerate(net.od_pairs):
        for cls in CLASSES:
            want = params.class_share(cls) * od.demand
            got = met.get((k, cls), 0.0)
            if abs(got - want) > tol * max(1.0, want):
                raise InputError(
                    f"O-D index {k} class {cls}: path flows sum to {got}, "
                    f"demand requires {want}"
                )


def beckmann_potential(
    net: RoadNetwork,
    flows: FlowAssignment,
    params: ClassParams,
    sc: ChargingScenario,
) -> float:
    """Potential whose minimizers over the demand polytope are equilibria.

    ``tau * sum_a int_0^{x_a} delay + sum tolls*x + sum_s int_0^{L_s} price``.
    The energy integrals are divided by ``fleet_scale`` so that the
    partial derivatives stay equal to the per-vehicle arc costs for any
    scale (the two conventions coincide at the default scale 1).
    """
    check_feasible(net, flows, params)
    return _SolveContext(net, params, sc).potential(flows.matrix)


def beckmann_gradient(
    net: RoadNetwork,
    flows: FlowAssignment,
    params: ClassParams,
    sc: ChargingScenario,
) -> np.ndarray:
    """Partial derivatives of the potential: the generalized arc costs.

    Shape ``(n_arcs, 2)`` with columns (ev, gv); entry (a, s) equals
    ``tau*d_a(x_a) + toll_{a,s} + l_a*m_s*price_s`` with the EV price
    evaluated at the current fleet charging need.
    """
    return _SolveContext(net, params, sc).gradient(flows.matrix)


# -- conditional-gradient solver ---------------------------------------------


class _Polytope:
    """Per-(class, O-D) bookkeeping of generated paths and their weights.

    The iterate is a convex combination of all-or-nothing assignments;
    keeping the combination per commodity gives path flows for free and
    enables away steps over the generated vertices.
    """

    def __init__(self, net: RoadNetwork, params: ClassParams):
        self.net = net
        self.commodities: list[tuple[str, float]] = []  # (cls, demand mass)
        for od in net.od_pairs:
            for cls in CLASSES:
                mass = params.class_share(cls) * od.demand
                self.commodities.append((cls, mass))
        self.ods = [od for od in net.od_pairs for _ in CLASSES]
        # weights[i]: dict path -> weight (sums to 1 per commodity with mass>0)
        self.weights: list[dict[tuple[str, ...], float]] = [
            {} for _ in self.commodities
        ]

    def arc_matrix(self) -> np.ndarray:
        mat = np.zeros((self.net.n_arcs, 2))
        for i, (cls, mass) in enumerate(self.commodities):
            if mass <= 0.0:
                continue
            j = CLASSES.index(cls)
            for path, w in self.weights[i].items():
                f = w * mass
                for arc_id in path:
                    mat[self.net.arc_index(arc_id), j] += f
        return mat

    def path_flows(self) -> dict[tuple[tuple[str, ...], str], float]:
        out: dict[tuple[tuple[str, ...], str], float] = {}
        for i, (cls, mass) in enumerate(self.commodities):
            if mass <= 0.0:
                continue
            for path, w in self.weights[i].items():
                if w <= 0.0:
                    continue
                key = (path, cls)
                out[key] = out.get(key, 0.0) + w * mass
        return out

    def set_vertex(self, paths: Sequence[tuple[str, ...]]) -> None:
        for i, path in enumerate(paths):
            self.weights[i] = {path: 1.0}

    def mix_towards(self, paths: Sequence[tuple[str, ...]], gamma: float) -> None:
        """x <- (1-gamma) x + gamma * vertex(paths)."""
        for i, path in enumerate(paths):
            w = self.weights[i]
            for p in list(w):
                w[p] *= 1.0 - gamma
                if w[p] < 1e-16:
                    del w[p]
            w[path] = w.get(path, 0.0) + gamma

    def away_step(self, i: int, path: tuple[str, ...], gamma: float) -> None:
        """Apply x <- x + gamma (x - vertex(path)) to one commodity.

        All weights scale by (1 + gamma) and the away path loses gamma;
        gamma <= alpha/(1-alpha) keeps every weight nonnegative.
        """
        w = self.weights[i]
        for p in list(w):
            w[p] *= 1.0 + gamma
        w[path] -= gamma
        if w[path] < 1e-16:
            del w[path]


def _aon_paths(
    net: RoadNetwork, grad: np.ndarray, poly: _Polytope
) -> tuple[list[tuple[str, ...]], np.ndarray]:
    """Cheapest path per commodity under the current gradient costs."""
    paths: list[tuple[str, ...]] = []
    mat = np.zeros((net.n_arcs, 2))
    cache: dict[tuple[str, str, str], tuple[tuple[str, ...], float]] = {}
    for i, (cls, mass) in enumerate(poly.commodities):
        od = poly.ods[i]
        j = CLASSES.index(cls)
        key = (od.origin, od.destination, cls)
        if key not in cache:
            cache[key] = shortest_path(net, od.origin, od.destination, grad[:, j])
        path, _ = cache[key]
        paths.append(path)
        if mass > 0.0:
            for arc_id in path:
                mat[net.arc_index(arc_id), j] += mass
    return paths, mat


def _line_search(
    ctx: _SolveContext,
    x: np.ndarray,
    d: np.ndarray,
    gamma_max: float,
    tol: float,
) -> float:
    """Exact step along a descent segment by bisection on the slope.

    The slope is increasing in the step when the unit price is monotone;
    bisection then brackets the root of the directional derivative.
    """
    slope = ctx.slope_function(x, d)
    lo, hi = 0.0, gamma_max
    if slope(hi) <= 0.0:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def random_feasible_assignment(
    net: RoadNetwork,
    params: ClassParams,
    rng: np.random.Generator,
    n_vertices: int = 4,
) -> dict[tuple[tuple[str, ...], str], float]:
    """Random feasible path flows (Dirichlet mix of random-cost routings)."""
    mixes: dict[tuple[tuple[str, ...], str], float] = {}
    weights = rng.dirichlet(np.ones(n_vertices))
    for w in weights:
        costs = rng.uniform(0.1, 10.0, size=net.n_arcs)
        for od in net.od_pairs:
            path, _ = shortest_path(net, od.origin, od.destination, costs)
            for cls in CLASSES:
                mass = params.class_share(cls) * od.demand
                if mass <= 0.0:
                    continue
                key = (path, cls)
                mixes[key] = mixes.get(key, 0.0) + w * mass
    return mixes


def solve_equilibrium(
    net: RoadNetwork,
    params: ClassParams,
    sc: ChargingScenario,
    cfg: EquilibriumConfig | None = None,
    initial_path_flows: Mapping[tuple[tuple[str, ...], str], float] | None = None,
    use_away_steps: bool = True,
    record_history: bool = False,
) -> EquilibriumResult:
    """Conditional-gradient minimization of the potential.

    Starts from the all-or-nothing assignment at empty-network costs (or
    from the supplied feasible path flows), then alternates shortest-path
    subproblems with exact line searches; away steps over the generated
    paths remove the usual conditional-gradient tail stalling.  Stops
    when the relative duality gap drops below ``cfg.gap_tolerance``.

    Raises :class:`SolverError` (carrying the last iterate) when the
    iteration budget runs out first.
    """
    cfg = cfg or EquilibriumConfig()
    drop = [od for od in net.od_pairs if od.demand <= 0.0]
    if drop:
        keep = [od for od in net.od_pairs if od.demand > 0.0]
        net = RoadNetwork(net.nodes, net.arcs, keep, net.tolls, None)
    poly = _Polytope(net, params)
    mono = charging.is_price_increasing(sc)

    if initial_path_flows is not None:
        total_mass: dict[int, float] = {}
        for (path, cls), f in initial_path_flows.items():
            placed = False
            for i, (c, mass) in enumerate(poly.commodities):
                od = poly.ods[i]
                if c != cls or mass <= 0.0:
                    continue
                arcs = [net.arcs[net.arc_index(a)] for a in path]
                if arcs[0].tail == od.origin and arcs[-1].head == od.destination:
                    poly.weights[i][tuple(path)] = (
                        poly.weights[i].get(tuple(path), 0.0) + f / mass
                    )
                    total_mass[i] = total_mass.get(i, 0.0) + f
                    placed = True
                    break
            if not placed:
                raise InputError(f"initial path {path}/{cls} matches no demand")
        for i, (cls, mass) in enumerate(poly.commodities):
            if mass <= 0.0:
                continue
            got = total_mass.get(i, 0.0)
            if abs(got - mass) > 1e-9 * max(1.0, mass):
                raise InputError(
                    f"initial flows for commodity {i} sum to {got}, need {mass}"
                )
            norm = sum(poly.weights[i].values())
            poly.weights[i] = {p: w / norm for p, w in poly.weights[i].items()}
        x = poly.arc_matrix()
    else:
        ctx0 = _SolveContext(net, params, sc)
        paths0, x = _aon_paths(net, ctx0.gradient(np.zeros((net.n_arcs, 2))), poly)
        poly.set_vertex(paths0)

    ctx = _SolveContext(net, params, sc)
    potential = ctx.potential(x)
    rel_gap = math.inf
    iterations = 0
    history = [potential] if record_history else None

    for iterations in range(1, cfg.max_iterations + 1):
        grad = ctx.gradient(x)
        paths, y = _aon_paths(net, grad, poly)
        fw_dir = y - x
        gap = -float(np.sum(grad * fw_dir))  # <grad, x - y> >= 0
        scale = max(abs(potential), 1e-12)
        rel_gap = gap / scale
        if rel_gap <= cfg.gap_tolerance:
            break

        step_dir = fw_dir
        step_max = 1.0
        away = None
        if use_away_steps:
            away = _worst_vertex(net, poly, grad)
            if away is not None:
                a_idx, a_path, a_weight, away_score = away
                # away direction d = x - vertex_i(a_path) restricted to commodity i
                if away_score > gap:
                    cls, mass = poly.commodities[a_idx]
                    j = CLASSES.index(cls)
                    d = np.zeros_like(x)
                    for p, w in poly.weights[a_idx].items():
                        for arc_id in p:
                            d[net.arc_index(arc_id), j] += w * mass
                    for arc_id in a_path:
                        d[net.arc_index(arc_id), j] -= mass
                    step_dir = d
                    step_max = a_weight / (1.0 - a_weight) if a_weight < 1.0 else 0.0
                    if step_max <= 0.0:
                        step_dir = fw_dir
                        step_max = 1.0
                        away = None
                else:
                    away = None

        if float(np.sum(grad * step_dir)) >= 0.0:
            # Numerical corner: no descent available in the chosen direction.
            step_dir, step_max, away = fw_dir, 1.0, None
            if gap <= 0.0:
                break

        gamma = _line_search(ctx, x, step_dir, step_max, cfg.line_search_tolerance)
        if not mono.increasing:
            # Outside the monotone-price regime the slope may be nonmonotone;
            # accept the bisection step only if it actually descends.
            if ctx.potential(x + gamma * step_dir) > potential:
                gamma = min(2.0 / (iterations + 2.0), step_max)

        if gamma <= 0.0:
            continue
        if away is not None and step_dir is not fw_dir:
            a_idx, a_path, _, _ = away
            poly.away_step(a_idx, a_path, gamma)
            x = poly.arc_matrix()
        else:
            poly.mix_towards(paths, gamma)
            x = x + gamma * fw_dir
        potential = ctx.potential(x)
        if history is not None:
            history.append(potential)
    else:
        flows = FlowAssignment(net, x, path_flows=poly.path_flows())
        energies = _class_energies(net, flows, params)
        result = EquilibriumResult(
            flows=flows,
            charging_need=energies[EV],
            unit_price=charging_unit_price(sc, energies[EV]),
            potential=potential,
            relative_gap=rel_gap,
            iterations=iterations,
            unique_regime=mono.increasing,
        )
        raise SolverError(
            f"no convergence after {cfg.max_iterations} iterations "
            f"(relative gap {rel_gap:.3e} > {cfg.gap_tolerance:.3e})",
            result,
        )

    flows = FlowAssignment(net, x, path_flows=poly.path_flows())
    energies = _class_energies(net, flows, params)
    check = verify_wardrop(net, flows, params, sc, cfg.wardrop_epsilon)
    return EquilibriumResult(
        flows=flows,
        charging_need=energies[EV],
        unit_price=charging_unit_price(sc, energies[EV]),
        potential=potential,
        relative_gap=rel_gap,
        iterations=iterations,
        wardrop_residual=check.residual,
        certified=check.passed,
        unique_regime=mono.increasing,
        potential_history=tuple(history) if history is not None else None,
    )


def _worst_vertex(
    net: RoadNetwork, poly: _Polytope, grad: np.ndarray
) -> tuple[int, tuple[str, ...], float, float] | None:
    """Most expensive carried path across commodities (away candidate).

    Returns ``(commodity, path, weight, score)`` where score is the gap
    contribution ``<grad, x - vertex>`` of swapping that commodity fully
    away from the path; None when no commodity carries two paths.
    """
    best = None
    for i, (cls, mass) in enumerate(poly.commodities):
        if mass <= 0.0 or len(poly.weights[i]) < 2:
            continue
        j = CLASSES.index(cls)
        avg = 0.0
        costs = {}
        for p, w in poly.weights[i].items():
            c = sum(grad[net.arc_index(a), j] for a in p)
            costs[p] = c
            avg += w * c
        path, cost = max(costs.items(), key=lambda kv: (kv[1], kv[0]))
        score = mass * (cost - avg)
        if score > 0.0 and (best is None or score > best[3]):
            best = (i, path, poly.weights[i][path], score)
    return best


# -- certification -----------------------------------------------------------


@dataclass(frozen=True)
class WardropCheck:
    residual: float
    passed: bool
    worst_commodity: str = ""


def verify_wardrop(
    net: RoadNetwork,
    flows: FlowAssignment,
    params: ClassParams,
    sc: ChargingScenario,
    epsilon: float = 1e-5,
) -> WardropCheck:
    """Certify the equilibrium conditions of a flow pattern.

    For every class and O-D pair, compares the flow-weighted average cost
    of the used paths (flow >= 1e-9) against the cheapest path available
    at these flows; the residual is the worst relative excess.  Requires
    path flows (solver output) or an enumerable path set.
    """
    grad = _SolveContext(net, params, sc).gradient(flows.matrix)
    grad_costs = {cls: grad[:, j] for j, cls in enumerate(CLASSES)}

    path_flows = flows.path_flows
    if path_flows is None:
        raise InputError(
            "verify_wardrop needs path flows; pass solver output or build "
            "the assignment from path flows"
        )

    residual = 0.0
    worst = ""
    for od in net.od_pairs:
        for cls in CLASSES:
            mass = params.class_share(cls) * od.demand
            if mass <= 0.0:
                continue
            _, best_cost = shortest_path(net, od.origin, od.destination, grad_costs[cls])
            used_cost = 0.0
            used_mass = 0.0
            for (path, pcls), f in path_flows.items():
                if pcls != cls or f < 1e-9:
                    continue
                arcs = [net.arcs[net.arc_index(a)] for a in path]
                if arcs[0].tail != od.origin or arcs[-1].head != od.destination:
                    continue
                c = sum(grad_costs[cls][net.arc_index(a)] for a in path)
                used_cost += f * c
                used_mass += f
            if used_mass <= 0.0:
                continue
            avg = used_cost / used_mass
            rel = float((avg - best_cost) / best_cost) if best_cost > 0 else 0.0
            if rel > residual:
                residual = rel
                worst = f"{od.origin}->{od.destination}/{cls}"
    return WardropCheck(
        residual=float(residual),
        passed=bool(residual <= epsilon),
        worst_commodity=worst,
    )


# -- brute-force oracle for parallel networks --------------------------------


def enumerate_parallel_equilibrium(
    net: RoadNetwork,
    params: ClassParams,
    sc: ChargingScenario,
    grid_resolution: int = 24,
    polish: bool = True,
) -> FlowAssignment:
    """Brute-force minimizer of the potential on a parallel-arc network.

    Scans the product of per-class splits over the arcs on a simplex
    grid, then refines the best grid point with a local constrained
    minimizer.  Only meant as a test oracle for two-node networks with
    at most four parallel arcs; independent of the conditional-gradient
    solver.
    """
    heads = {a.head for a in net.arcs}
    tails = {a.tail for a in net.arcs}
    if len(net.od_pairs) != 1 or len(heads) != 1 or len(tails) != 1:
        raise InputError("oracle supports a single O-D pair of parallel arcs")
    if net.n_arcs > 4:
        raise InputError("oracle limited to at most 4 parallel arcs")
    A = net.n_arcs
    demand = net.od_pairs[0].demand
    masses = np.array([params.class_share(cls) * demand for cls in CLASSES])

    lengths = net.lengths
    d0 = np.array([a.free_flow_time for a in net.arcs])
    alph = np.array([a.bpr_alpha for a in net.arcs])
    beta = np.array([a.bpr_beta for a in net.arcs])
    cap = np.array([a.capacity for a in net.arcs])
    tolls = np.stack([net.toll_vector(cls) for cls in CLASSES], axis=1)

    def batch_potential(ev: np.ndarray, gv: np.ndarray) -> np.ndarray:
        totals = ev + gv
        cong = np.sum(
            d0 * (totals + alph * totals ** (beta + 1.0) / ((beta + 1.0) * cap**beta)),
            axis=1,
        )
        val = params.tau * cong
        val += ev @ tolls[:, 0] + gv @ tolls[:, 1]
        L_e = params.m_e * params.fleet_scale * (ev @ lengths)
        L_g = params.m_g * params.fleet_scale * (gv @ lengths)
        val += params.lambda_g * L_g / params.fleet_scale
        lam_int = np.array([lambda_integral(sc, float(L)) for L in L_e])
        val += lam_int / params.fleet_scale
        return val

    def simplex_points(total: float, res: int) -> np.ndarray:
        if total <= 0.0:
            return np.zeros((1, A))
        return np.array(
            [np.array(c, dtype=float) / res * total for c in _compositions(res, A)]
        )

    ev_pts = simplex_points(masses[0], grid_resolution)
    gv_pts = simplex_points(masses[1], grid_resolution)
    ev_rep = np.repeat(ev_pts, len(gv_pts), axis=0)
    gv_rep = np.tile(gv_pts, (len(ev_pts), 1))
    vals = batch_potential(ev_rep, gv_rep)
    k = int(np.argmin(vals))
    ev_best, gv_best = ev_rep[k].copy(), gv_rep[k].copy()

    if polish:
        from scipy.optimize import minimize

        def objective(z: np.ndarray) -> float:
            return float(batch_potential(z[None, :A], z[None, A:])[0])

        cons = [
            {"type": "eq", "fun": lambda z, m=masses[0]: np.sum(z[:A]) - m},
            {"type": "eq", "fun": lambda z, m=masses[1]: np.sum(z[A:]) - m},
        ]
        bounds = [(0.0, masses[0])] * A + [(0.0, masses[1])] * A
        z0 = np.concatenate([ev_best, gv_best])
        res = minimize(
            objective,
            z0,
            method="SLSQP",
            bounds=bounds,
            constraints=cons,
            options={"maxiter": 500, "ftol": 1e-14},
        )
        if res.success and objective(res.x) <= vals[k] + 1e-12:
            ev_best = np.maximum(res.x[:A], 0.0)
            gv_best = np.maximum(res.x[A:], 0.0)
            if masses[0] > 0:
                ev_best *= masses[0] / max(ev_best.sum(), 1e-300)
            if masses[1] > 0:
                gv_best *= masses[1] / max(gv_best.sum(), 1e-300)

    mat = np.stack([ev_best, gv_best], axis=1)
    return FlowAssignment(net, mat)


def _compositions(total: int, parts: int):
    """Integer compositions of ``total`` into ``parts`` nonnegative parts."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
