"""Road network, vehicle classes, flows and per-arc generalized costs.

Two vehicle classes share the graph: electric ("ev") and gasoline ("gv").
Travel time on an arc follows the Bureau-of-Public-Roads delay curve and
depends on the total flow; energy and toll costs are class specific.
Units are fixed throughout: km, hours, kWh (liters for gasoline), EUR;
flows are fractions of the fleet per unit time.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

EV = "ev"
GV = "gv"
CLASSES = (EV, GV)

__all__ = [
    "EV",
    "GV",
    "CLASSES",
    "Arc",
    "ODPair",
    "ClassParams",
    "RoadNetwork",
    "FlowAssignment",
    "InputError",
    "travel_time",
    "travel_time_derivative",
    "arc_generalized_cost",
    "path_cost",
    "total_class_energy",
    "arc_flows_from_path_flows",
    "shortest_path",
    "build_parallel_network",
    "enumerate_paths",
    "load_network_json",
    "load_class_params_json",
    "load_scenario_json",
    "fleet_scale_for_energy_fraction",
]


class InputError(ValueError):
    """Invalid user-supplied data (files, flows, identifiers)."""


@dataclass(frozen=True)
class Arc:
    """Directed road segment with BPR congestion parameters."""

    id: str
    tail: str
    head: str
    length_km: float
    capacity: float
    free_flow_speed: float
    bpr_alpha: float = 2.0
    bpr_beta: float = 4.0

    def __post_init__(self):
        if self.length_km <= 0 or not math.isfinite(self.length_km):
            raise InputError(f"arc {self.id}: length must be > 0")
        if self.capacity <= 0 or not math.isfinite(self.capacity):
            raise InputError(f"arc {self.id}: capacity must be > 0")
        if self.free_flow_speed <= 0 or not math.isfinite(self.free_flow_speed):
            raise InputError(f"arc {self.id}: free-flow speed must be > 0")
        if self.bpr_alpha <= 0:
            raise InputError(f"arc {self.id}: bpr_alpha must be > 0")
        if self.bpr_beta <= 1:
            raise InputError(f"arc {self.id}: bpr_beta must be > 1")

    @property
    def free_flow_time(self) -> float:
        """Uncongested traversal time (h)."""
        return self.length_km / self.free_flow_speed


@dataclass(frozen=True)
class ODPair:
    origin: str
    destination: str
    demand: float

    def __post_init__(self):
        if self.demand < 0 or not math.isfinite(self.demand):
            raise InputError(
                f"O-D {self.origin}->{self.destination}: demand must be >= 0"
            )


@dataclass(frozen=True)
class ClassParams:
    """Fleet composition and per-class cost parameters.

    ``fleet_scale`` converts one unit of normalized flow into the energy
    demand it represents; it multiplies the aggregated class energies and
    nothing else (default 1 keeps units as plain flow * km * rate).
    """

    x_e: float = 0.5
    m_e: float = 0.2   # kWh/km
    m_g: float = 0.06  # L/km
    lambda_g: float = 1.5  # EUR/L
    tau: float = 10.0  # EUR/h
    fleet_scale: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.x_e <= 1.0:
            raise InputError(f"x_e must lie in [0, 1], got {self.x_e}")
        for name in ("m_e", "m_g", "lambda_g", "tau", "fleet_scale"):
            v = getattr(self, name)
            if v <= 0 or not math.isfinite(v):
                raise InputError(f"{name} must be > 0, got {v}")

    @property
    def x_g(self) -> float:
        return 1.0 - self.x_e

    def class_share(self, cls: str) -> float:
        return self.x_e if cls == EV else self.x_g

    def consumption_rate(self, cls: str) -> float:
        """Energy use per km: kWh/km for EV, L/km for GV."""
        return self.m_e if cls == EV else self.m_g


class RoadNetwork:
    """Immutable directed graph with demands, tolls and optional paths.

    ``tolls`` maps ``(arc_id, cls)`` to EUR; absent entries are zero.
    ``paths``, when set, holds per O-D index the list of directed paths
    (tuples of arc ids) used by the path-based operations.
    """

    def __init__(
        self,
        nodes: Iterable[str],
        arcs: Sequence[Arc],
        od_pairs: Sequence[ODPair],
        tolls: Mapping[tuple[str, str], float] | None = None,
        paths: Mapping[int, Sequence[Sequence[str]]] | None = None,
    ):
        self.nodes = tuple(str(n) for n in nodes)
        self.arcs = tuple(arcs)
        self.od_pairs = tuple(od_pairs)
        node_set = set(self.nodes)
        ids = [a.id for a in self.arcs]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate arc ids")
        for a in self.arcs:
            if a.tail not in node_set or a.head not in node_set:
                raise InputError(f"arc {a.id}: endpoint not in node set")
        for od in self.od_pairs:
            if od.origin not in node_set or od.destination not in node_set:
                raise InputError(
                    f"O-D {od.origin}->{od.destination}: node not in node set"
                )
        self._index = {a.id: i for i, a in enumerate(self.arcs)}
        self._tolls = {}
        for (arc_id, cls), euro in dict(tolls or {}).items():
            if arc_id not in self._index:
                raise InputError(f"toll references unknown arc {arc_id!r}")
            if cls not in CLASSES:
                raise InputError(f"toll references unknown class {cls!r}")
            if euro < 0:
                raise InputError(f"toll on {arc_id} must be >= 0")
            self._tolls[(arc_id, cls)] = float(euro)
        # adjacency in arc-id order gives deterministic tie-breaking downstream
        adj: dict[str, list[int]] = {n: [] for n in self.nodes}
        for i, a in sorted(enumerate(self.arcs), key=lambda t: t[1].id):
            adj[a.tail].append(i)
        self._adjacency = {n: tuple(v) for n, v in adj.items()}
        # frozen per-arc arrays for the numeric hot paths
        self._lengths = np.array([a.length_km for a in self.arcs])
        self._d0 = np.array([a.free_flow_time for a in self.arcs])
        self._bpr_alpha = np.array([a.bpr_alpha for a in self.arcs])
        self._bpr_beta = np.array([a.bpr_beta for a in self.arcs])
        self._capacity = np.array([a.capacity for a in self.arcs])
        if paths is not None:
            self.paths = {
                int(k): tuple(tuple(p) for p in v) for k, v in paths.items()
            }
            for k, plist in self.paths.items():
                if not 0 <= k < len(self.od_pairs):
                    raise InputError(f"paths reference unknown O-D index {k}")
                for p in plist:
                    self._check_path(k, p)
        else:
            self.paths = None

    # -- basic accessors ---------------------------------------------------

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def arc_index(self, arc_id: str) -> int:
        try:
            return self._index[arc_id]
        except KeyError:
            raise InputError(f"unknown arc id {arc_id!r}") from None

    def toll(self, arc_id: str, cls: str) -> float:
        return self._tolls.get((arc_id, cls), 0.0)

    @property
    def tolls(self) -> dict[tuple[str, str], float]:
        return dict(self._tolls)

    def with_toll(self, arc_id: str, cls: str, euro: float) -> "RoadNetwork":
        """Copy of the network with one toll entry replaced."""
        tolls = dict(self._tolls)
        tolls[(arc_id, cls)] = float(euro)
        return RoadNetwork(self.nodes, self.arcs, self.od_pairs, tolls, self.paths)

    def toll_vector(self, cls: str) -> np.ndarray:
        return np.array([self.toll(a.id, cls) for a in self.arcs])

    @property
    def lengths(self) -> np.ndarray:
        return self._lengths.copy()

    def travel_times(self, totals: np.ndarray) -> np.ndarray:
        """Vectorized BPR travel times (h) at the given total flows."""
        return self._d0 * (
            1.0 + self._bpr_alpha * (totals / self._capacity) ** self._bpr_beta
        )

    def congestion_integral(self, totals: np.ndarray) -> float:
        """Sum over arcs of the BPR delay antiderivative (h)."""
        return float(
            np.sum(
                self._d0
                * (
                    totals
                    + self._bpr_alpha
                    * totals ** (self._bpr_beta + 1.0)
                    / ((self._bpr_beta + 1.0) * self._capacity**self._bpr_beta)
                )
            )
        )

    def _check_path(self, od_index: int, path: Sequence[str]) -> None:
        od = self.od_pairs[od_index]
        if not path:
            raise InputError(f"O-D index {od_index}: empty path")
        arcs = [self.arcs[self.arc_index(aid)] for aid in path]
        if arcs[0].tail != od.origin or arcs[-1].head != od.destination:
            raise InputError(
                f"path {tuple(path)} does not join {od.origin} to {od.destination}"
            )
        for prev, nxt in zip(arcs, arcs[1:]):
            if prev.head != nxt.tail:
                raise InputError(f"path {tuple(path)} is not connected")

    def require_paths(self) -> dict[int, tuple[tuple[str, ...], ...]]:
        if self.paths is None:
            raise InputError(
                "operation needs enumerated paths; build the network with "
                "paths or call enumerate_paths first"
            )
        return self.paths


class FlowAssignment:
    """Per-class arc flows, optionally backed by path flows.

    Internally a ``(n_arcs, 2)`` array in the order of ``net.arcs`` with
    column 0 = ev, column 1 = gv.  Values are never negative.
    """

    def __init__(
        self,
        net: RoadNetwork,
        arc_flows: np.ndarray | Mapping[tuple[str, str], float],
        path_flows: Mapping[tuple[tuple[str, ...], str], float] | None = None,
    ):
        if isinstance(arc_flows, np.ndarray):
            mat = np.array(arc_flows, dtype=float)
            if mat.shape != (net.n_arcs, 2):
                raise InputError(
                    f"arc flow array must have shape ({net.n_arcs}, 2)"
                )
        else:
            mat = np.zeros((net.n_arcs, 2))
            for (arc_id, cls), v in arc_flows.items():
                if cls not in CLASSES:
                    raise InputError(f"unknown class {cls!r}")
                mat[net.arc_index(arc_id), CLASSES.index(cls)] = float(v)
        if np.any(mat < -1e-12) or not np.all(np.isfinite(mat)):
            raise InputError("arc flows must be finite and >= 0")
        self.matrix = np.maximum(mat, 0.0)
        self.path_flows = dict(path_flows) if path_flows is not None else None

    def flow(self, net: RoadNetwork, arc_id: str, cls: str) -> float:
        return float(self.matrix[net.arc_index(arc_id), CLASSES.index(cls)])

    def class_vector(self, cls: str) -> np.ndarray:
        return self.matrix[:, CLASSES.index(cls)]

    @property
    def totals(self) -> np.ndarray:
        """Total flow per arc (both classes)."""
        return self.matrix.sum(axis=1)

    def as_dict(self, net: RoadNetwork) -> dict[tuple[str, str], float]:
        return {
            (a.id, cls): float(self.matrix[i, j])
            for i, a in enumerate(net.arcs)
            for j, cls in enumerate(CLASSES)
        }


# -- elementary cost operations -------------------------------------------


def travel_time(arc: Arc, x_a: float) -> float:
    """BPR travel time (h) at total arc flow ``x_a``.

    ``d0 * (1 + alpha * (x/C)**beta)``: strictly increasing and convex in
    the flow for ``beta > 1``.
    """
    if x_a < 0 or not math.isfinite(x_a):
        raise InputError(f"arc flow must be finite and >= 0, got {x_a}")
    return arc.free_flow_time * (
        1.0 + arc.bpr_alpha * (x_a / arc.capacity) ** arc.bpr_beta
    )


def travel_time_derivative(arc: Arc, x_a: float) -> float:
    if x_a < 0:
        raise InputError(f"arc flow must be >= 0, got {x_a}")
    return (
        arc.free_flow_time
        * arc.bpr_alpha
        * arc.bpr_beta
        * (x_a / arc.capacity) ** (arc.bpr_beta - 1.0)
        / arc.capacity
    )


def arc_generalized_cost(
    arc: Arc,
    x_a: float,
    cls: str,
    params: ClassParams,
    unit_price_e: float,
    toll: float = 0.0,
) -> float:
    """Money cost (EUR) of one vehicle of ``cls`` crossing the arc.

    Time valued at ``tau`` EUR/h plus the class toll plus the energy
    bought for the arc length; ``unit_price_e`` is the EV electricity
    price in EUR/kWh (ignored for gasoline vehicles, which pay the
    exogenous fuel price).
    """
    if unit_price_e < 0:
        raise InputError("EV unit price must be >= 0")
    rate = params.consumption_rate(cls)
    price = unit_price_e if cls == EV else params.lambda_g
    return params.tau * travel_time(arc, x_a) + toll + arc.length_km * rate * price


def path_cost(
    net: RoadNetwork,
    path: Sequence[str],
    flows: FlowAssignment,
    cls: str,
    params: ClassParams,
    unit_price_e: float,
) -> float:
    """Sum of generalized arc costs along a path at the given flows."""
    totals = flows.totals
    cost = 0.0
    for arc_id in path:
        i = net.arc_index(arc_id)
        cost += arc_generalized_cost(
            net.arcs[i], float(totals[i]), cls, params, unit_price_e,
            toll=net.toll(arc_id, cls),
        )
    return cost


def total_class_energy(
    net: RoadNetwork, flows: FlowAssignment, cls: str, params: ClassParams
) -> float:
    """Aggregated energy need of one class (kWh for ev, L for gv).

    Consumption is proportional to distance, so this is
    ``rate * fleet_scale * sum_a flow_a * length_a``.
    """
    x = flows.class_vector(cls)
    return float(
        params.consumption_rate(cls) * params.fleet_scale * np.dot(x, net.lengths)
    )


def arc_flows_from_path_flows(
    net: RoadNetwork,
    path_flows: Mapping[tuple[tuple[str, ...], str], float],
) -> FlowAssignment:
    """Aggregate path flows into per-class arc flows.

    Keys are ``(path, cls)`` with ``path`` a tuple of arc ids; every arc
    of a path receives the full path flow.
    """
    mat = np.zeros((net.n_arcs, 2))
    for (path, cls), f in path_flows.items():
        if cls not in CLASSES:
            raise InputError(f"unknown class {cls!r}")
        if f < 0:
            raise InputError(f"path flow must be >= 0, got {f}")
        j = CLASSES.index(cls)
        for arc_id in path:
            mat[net.arc_index(arc_id), j] += float(f)
    return FlowAssignment(net, mat, path_flows=dict(path_flows))


# -- shortest paths ---------------------------------------------------------


def shortest_path(
    net: RoadNetwork,
    origin: str,
    destination: str,
    arc_cost: Sequence[float] | np.ndarray,
) -> tuple[tuple[str, ...], float]:
    """Minimum-cost directed path under nonnegative per-arc costs.

    Ties are broken deterministically: among equal-cost paths the one
    whose arc-id sequence is lexicographically smallest wins.  Raises
    :class:`InputError` when the destination cannot be reached.
    """
    costs = np.asarray(arc_cost, dtype=float)
    if costs.shape != (net.n_arcs,):
        raise InputError(f"arc cost vector must have length {net.n_arcs}")
    if np.any(costs < 0) or np.any(~np.isfinite(costs)):
        raise InputError("arc costs must be finite and >= 0")
    if origin not in net._adjacency:
        raise InputError(f"unknown origin {origin!r}")
    # Dijkstra on labels (cost, arc-id sequence); the lexicographic part of
    # the label is preserved under extension, so the first pop is optimal.
    best: dict[str, tuple[float, tuple[str, ...]]] = {}
    heap: list[tuple[float, tuple[str, ...], str]] = [(0.0, (), origin)]
    while heap:
        dist, ids, node = heapq.heappop(heap)
        if node in best:
            continue
        best[node] = (dist, ids)
        if node == destination:
            return ids, dist
        for i in net._adjacency[node]:
            arc = net.arcs[i]
            if arc.head in best:
                continue
            heapq.heappush(heap, (dist + costs[i], ids + (arc.id,), arc.head))
    raise InputError(f"no path from {origin!r} to {destination!r}")


def enumerate_paths(
    net: RoadNetwork, max_paths: int = 10_000
) -> dict[int, tuple[tuple[str, ...], ...]]:
    """All simple directed paths per O-D pair (for small networks).

    Paths are returned sorted by arc-id sequence.  Raises when the count
    exceeds ``max_paths``; large or cyclic networks should stay with the
    arc-based operations.
    """
    out: dict[int, tuple[tuple[str, ...], ...]] = {}
    for k, od in enumerate(net.od_pairs):
        found: list[tuple[str, ...]] = []

        def visit(node: str, used: set[str], trail: tuple[str, ...]):
            if len(found) > max_paths:
                raise InputError(
                    f"path enumeration exceeded {max_paths} paths"
                )
            if node == od.destination and trail:
                found.append(trail)
                return
            for i in net._adjacency[node]:
                arc = net.arcs[i]
                if arc.head in used:
                    continue
                visit(arc.head, used | {arc.head}, trail + (arc.id,))

        visit(od.origin, {od.origin}, ())
        if not found:
            raise InputError(
                f"O-D {od.origin}->{od.destination} is not connected"
            )
        out[k] = tuple(sorted(found))
    return out


# -- construction helpers ---------------------------------------------------


def build_parallel_network(
    lengths: Sequence[float] | None = None,
    speeds: Sequence[float] | None = None,
    capacities: Sequence[float] | None = None,
    bpr_alpha: float = 2.0,
    bpr_beta: float = 4.0,
) -> RoadNetwork:
    """Two nodes joined by parallel arcs, one O-D pair with unit demand.

    Called with no arguments it builds the three-route city instance: a
    30 km direct crossing at 50 km/h and two half-circle ring roads
    (pi/2 * 30 km) at 70 km/h, capacities (1/2, 1, 1/2), BPR 2 and 4.
    Arc ids are "a", "b", "c", ... in input order.
    """
    if lengths is None and speeds is None and capacities is None:
        lengths = [30.0, math.pi / 2.0 * 30.0, math.pi / 2.0 * 30.0]
        speeds = [50.0, 70.0, 70.0]
        capacities = [0.5, 1.0, 0.5]
    if lengths is None or speeds is None or capacities is None:
        raise InputError("provide all of lengths, speeds, capacities or none")
    if not (len(lengths) == len(speeds) == len(capacities)):
        raise InputError(
            f"mismatched vector lengths: {len(lengths)} lengths, "
            f"{len(speeds)} speeds, {len(capacities)} capacities"
        )
    if not lengths:
        raise InputError("need at least one arc")
    names = _arc_names(len(lengths))
    arcs = [
        Arc(
            id=names[i],
            tail="O",
            head="D",
            length_km=float(lengths[i]),
            capacity=float(capacities[i]),
            free_flow_speed=float(speeds[i]),
            bpr_alpha=bpr_alpha,
            bpr_beta=bpr_beta,
        )
        for i in range(len(lengths))
    ]
    net = RoadNetwork(
        nodes=["O", "D"],
        arcs=arcs,
        od_pairs=[ODPair("O", "D", 1.0)],
        paths={0: [(a.id,) for a in arcs]},
    )
    return net


def _arc_names(count: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    names = []
    for i in range(count):
        if i < len(letters):
            names.append(letters[i])
        else:
            names.append(f"arc{i}")
    return names


def fleet_scale_for_energy_fraction(
    net: RoadNetwork,
    params: ClassParams,
    total_nonflexible: float,
    fraction: float,
) -> float:
    """Fleet scale mapping the largest feasible EV energy need to a target.

    Returns the scale under which routing every electric vehicle over its
    longest available path yields ``fraction * total_nonflexible`` kWh.
    Requires enumerated paths.
    """
    if fraction <= 0:
        raise InputError("fraction must be > 0")
    if total_nonflexible <= 0:
        raise InputError("total nonflexible energy must be > 0")
    paths = net.require_paths()
    lengths = net.lengths
    max_energy = 0.0
    for k, od in enumerate(net.od_pairs):
        longest = max(
            sum(lengths[net.arc_index(a)] for a in p) for p in paths[k]
        )
        max_energy += params.x_e * od.demand * longest * params.m_e
    if max_energy <= 0:
        raise InputError("no electric demand: cannot scale energy")
    return fraction * total_nonflexible / max_energy


# -- file loading -----------------------------------------------------------

_ARC_KEYS = {
    "id", "tail", "head", "length_km", "capacity", "speed_kmh", "alpha", "beta",
}
_OD_KEYS = {"origin", "destination", "demand"}
_TOLL_KEYS = {"arc_id", "class", "euro"}
_NET_KEYS = {"nodes", "arcs", "od_pairs", "tolls", "class_params"}
_PARAM_KEYS = {"x_e", "m_e", "m_g", "lambda_g", "tau", "fleet_scale"}
_SCENARIO_KEYS = {"n", "eta", "ell0"}


def _reject_unknown(obj: Mapping, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise InputError(f"{where}: unknown key(s) {sorted(unknown)}")


def _load_json(path) -> object:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def load_network_json(path) -> tuple[RoadNetwork, ClassParams | None]:
    """Read a network file; returns the network and embedded class params.

    Schema: top-level keys ``nodes``, ``arcs`` (id, tail, head, length_km,
    capacity, speed_kmh, alpha, beta), ``od_pairs`` (origin, destination,
    demand), optional ``tolls`` (arc_id, class in {"ev","gv"}, euro) and
    optional ``class_params``.  Unknown keys are rejected with the field
    named in the error.
    """
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    _reject_unknown(data, _NET_KEYS, str(path))
    for key in ("nodes", "arcs", "od_pairs"):
        if key not in data:
            raise InputError(f"{path}: missing required key {key!r}")
    arcs = []
    for i, rec in enumerate(data["arcs"]):
        where = f"{path}: arcs[{i}]"
        if not isinstance(rec, dict):
            raise InputError(f"{where}: must be an object")
        _reject_unknown(rec, _ARC_KEYS, where)
        try:
            arcs.append(
                Arc(
                    id=str(rec["id"]),
                    tail=str(rec["tail"]),
                    head=str(rec["head"]),
                    length_km=float(rec["length_km"]),
                    capacity=float(rec["capacity"]),
                    free_flow_speed=float(rec["speed_kmh"]),
                    bpr_alpha=float(rec.get("alpha", 2.0)),
                    bpr_beta=float(rec.get("beta", 4.0)),
                )
            )
        except KeyError as exc:
            raise InputError(f"{where}: missing field {exc.args[0]!r}") from None
    od_pairs = []
    for i, rec in enumerate(data["od_pairs"]):
        where = f"{path}: od_pairs[{i}]"
        if not isinstance(rec, dict):
            raise InputError(f"{where}: must be an object")
        _reject_unknown(rec, _OD_KEYS, where)
        try:
            od_pairs.append(
                ODPair(str(rec["origin"]), str(rec["destination"]), float(rec["demand"]))
            )
        except KeyError as exc:
            raise InputError(f"{where}: missing field {exc.args[0]!r}") from None
    tolls = {}
    for i, rec in enumerate(data.get("tolls", [])):
        where = f"{path}: tolls[{i}]"
        if not isinstance(rec, dict):
            raise InputError(f"{where}: must be an object")
        _reject_unknown(rec, _TOLL_KEYS, where)
        try:
            tolls[(str(rec["arc_id"]), str(rec["class"]))] = float(rec["euro"])
        except KeyError as exc:
            raise InputError(f"{where}: missing field {exc.args[0]!r}") from None
    params = None
    if "class_params" in data:
        params = _class_params_from_dict(data["class_params"], f"{path}: class_params")
    net = RoadNetwork(data["nodes"], arcs, od_pairs, tolls)
    return net, params


def _class_params_from_dict(obj, where: str) -> ClassParams:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: must be an object")
    _reject_unknown(obj, _PARAM_KEYS, where)
    try:
        return ClassParams(**{k: float(v) for k, v in obj.items()})
    except InputError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def load_class_params_json(path) -> ClassParams:
    data = _load_json(path)
    return _class_params_from_dict(data, str(path))


def load_scenario_json(path):
    """Read a charging scenario file with keys ``n``, ``eta``, ``ell0``."""
    from .charging import ChargingScenario

    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    _reject_unknown(data, _SCENARIO_KEYS, str(path))
    for key in _SCENARIO_KEYS:
        if key not in data:
            raise InputError(f"{path}: missing required key {key!r}")
    try:
        return ChargingScenario(
            n=float(data["n"]),
            eta=[float(v) for v in data["eta"]],
            ell0=[float(v) for v in data["ell0"]],
        )
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
