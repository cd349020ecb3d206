"""Command-line front end.

One executable, file-based inputs, figure-ready CSV/JSON outputs.  Exit
codes: 0 success (equilibria certified), 2 solver non-convergence (a
partial result is still written), 3 input validation failure.  Every
artifact starts with a header block recording the tool version and the
SHA-256 of each input file, so runs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .charging import (
    ChargingScenario,
    is_price_increasing,
    schedule_charging,
)
from .equilibrium import (
    EquilibriumConfig,
    EquilibriumResult,
    SolverError,
    solve_equilibrium,
)
from .incentives import (
    EnvWeights,
    environmental_cost,
    optimize_toll,
    sweep_ev_penetration,
    sweep_fuel_price,
)
from .loaddata import monthly_increasing_fraction, parse_load_csv
from .network import (
    CLASSES,
    EV,
    ClassParams,
    InputError,
    RoadNetwork,
    load_class_params_json,
    load_network_json,
    load_scenario_json,
    travel_time,
)

EXIT_OK = 0
EXIT_NO_CONVERGENCE = 2
EXIT_VALIDATION = 3


def _fmt(x: float) -> str:
    """Locale-independent float with 10 significant digits."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".10g")


def _digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _meta(inputs: dict[str, Path | None], extra: dict | None = None) -> dict:
    meta = {"tool": "evwardrop", "version": __version__}
    for name, path in inputs.items():
        if path is not None:
            meta[f"{name}_sha256"] = _digest(Path(path))
    if extra:
        meta.update(extra)
    return meta


def _write_csv(path: Path, meta: dict, header: list[str], rows: list[list]) -> None:
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _round_floats(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(float(obj)))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(_round_floats(payload), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def _load_common(args) -> tuple[RoadNetwork, ClassParams, ChargingScenario]:
    net, embedded = load_network_json(args.network)
    params = embedded or ClassParams()
    if args.params:
        params = load_class_params_json(args.params)
    sc = load_scenario_json(args.scenario)
    return net, params, sc


def _config(args) -> EquilibriumConfig:
    return EquilibriumConfig(
        gap_tolerance=args.gap_tol, max_iterations=args.max_iter
    )


def _flow_rows(net: RoadNetwork, result: EquilibriumResult, params: ClassParams):
    totals = result.flows.totals
    rows = []
    for i, arc in enumerate(net.arcs):
        time_h = travel_time(arc, float(totals[i]))
        for j, cls in enumerate(CLASSES):
            price = result.unit_price if cls == EV else params.lambda_g
            cost = (
                params.tau * time_h
                + net.toll(arc.id, cls)
                + arc.length_km * params.consumption_rate(cls) * price
            )
            rows.append(
                [arc.id, cls, float(result.flows.matrix[i, j]), time_h, cost]
            )
    return rows


def _equilibrium_payload(net, result: EquilibriumResult, meta: dict) -> dict:
    return {
        "_meta": meta,
        "arc_flows": {
            f"{arc.id}/{cls}": float(result.flows.matrix[i, j])
            for i, arc in enumerate(net.arcs)
            for j, cls in enumerate(CLASSES)
        },
        **result.summary(),
    }


# -- subcommands -------------------------------------------------------------


def _cmd_solve(args) -> int:
    net, params, sc = _load_common(args)
    cfg = _config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta({"network": args.network, "scenario": args.scenario,
                  "params": args.params})
    try:
        result = solve_equilibrium(net, params, sc, cfg)
    except SolverError as exc:
        result = exc.result
        _write_json(out / "equilibrium.json", _equilibrium_payload(net, result, meta))
        _write_csv(
            out / "flows.csv", meta,
            ["arc_id", "class", "flow", "travel_time_h", "cost_eur"],
            _flow_rows(net, result, params),
        )
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    _write_json(out / "equilibrium.json", _equilibrium_payload(net, result, meta))
    _write_csv(
        out / "flows.csv", meta,
        ["arc_id", "class", "flow", "travel_time_h", "cost_eur"],
        _flow_rows(net, result, params),
    )
    print(
        f"certified={result.certified} gap={_fmt(result.relative_gap)} "
        f"residual={_fmt(result.wardrop_residual)} -> {out / 'equilibrium.json'}"
    )
    return EXIT_OK if result.certified else EXIT_NO_CONVERGENCE


def _cmd_schedule(args) -> int:
    sc = load_scenario_json(args.scenario)
    schedule = schedule_charging(sc, args.need)
    payload = {
        "schedule_kwh": list(schedule.ell_e),
        "total_cost_eur": schedule.value,
        "unit_price_eur_per_kwh": schedule.unit_price,
        "active_slots": schedule.active_slot_count,
    }
    text = json.dumps(_round_floats(payload), indent=2, sort_keys=True)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        payload["_meta"] = _meta({"scenario": args.scenario},
                                 {"need_kwh": _fmt(args.need)})
        _write_json(out / "schedule.json", payload)
    return EXIT_OK


def _cmd_check_lambda(args) -> int:
    sc = load_scenario_json(args.scenario)
    mono = is_price_increasing(sc)
    payload = {"ratio": round(mono.ratio, 4), "increasing": mono.increasing}
    if mono.degenerate_normalization:
        payload["degenerate_normalization"] = True
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _cmd_loadstats(args) -> int:
    ds = parse_load_csv(args.input)
    t_values = [int(v) for v in args.T.split(",") if v.strip()]
    if not t_values:
        raise InputError("--T needs at least one slot count")
    rows = []
    for T in t_values:
        for mf in monthly_increasing_fraction(
            ds, T, n=args.n, chronological=args.chrono
        ):
            rows.append([mf.month, mf.T, float(mf.fraction), mf.days_counted])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta({"input": args.input},
                 {"T": args.T, "n": _fmt(args.n), "chrono": str(args.chrono).lower()})
    _write_csv(out / "loadstats.csv", meta,
               ["month", "T", "fraction", "days_counted"], rows)
    print(f"wrote {out / 'loadstats.csv'} ({len(rows)} rows)")
    return EXIT_OK


def _sweep_flow_columns(net: RoadNetwork) -> list[str]:
    cols = []
    for arc in net.arcs:
        for cls in CLASSES:
            cols.append(f"flow_{arc.id}_{cls}")
    return cols


def _sweep_flow_values(net: RoadNetwork, result: EquilibriumResult) -> list[float]:
    return [
        float(result.flows.matrix[i, j])
        for i in range(net.n_arcs)
        for j in range(len(CLASSES))
    ]


def _cmd_sweep_toll(args) -> int:
    net, params, sc = _load_common(args)
    cfg = _config(args)
    weights = EnvWeights({args.arc: args.gamma}) if args.gamma != 1.0 else EnvWeights()
    try:
        sweep = optimize_toll(
            net, params, sc, weights, args.arc, args.max, args.step, cfg,
            keep_results=True,
        )
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(
        {"network": args.network, "scenario": args.scenario, "params": args.params},
        {"arc": args.arc, "gamma": _fmt(args.gamma), "step": _fmt(args.step),
         "best_toll": _fmt(sweep.best_toll), "gain": _fmt(sweep.gain)},
    )
    header = ["toll_eur"] + _sweep_flow_columns(net) + [
        "lambda_e", "c_env", "best_toll", "gain"
    ]
    rows = []
    for toll, cost, res in zip(sweep.toll_grid, sweep.env_costs, sweep.results):
        rows.append(
            [float(toll)] + _sweep_flow_values(net, res)
            + [res.unit_price, cost, sweep.best_toll, sweep.gain]
        )
    _write_csv(out / "sweep_toll.csv", meta, header, rows)
    print(
        f"best toll {_fmt(sweep.best_toll)} EUR on {args.arc} "
        f"(gain {_fmt(sweep.gain)}) -> {out / 'sweep_toll.csv'}"
    )
    return EXIT_OK


def _cmd_sweep_fuel(args) -> int:
    net, params, sc = _load_common(args)
    cfg = _config(args)
    n_steps = int(math.floor((args.max - args.min) / args.step + 1e-9))
    grid = [round(args.min + i * args.step, 10) for i in range(n_steps + 1)]
    try:
        results = sweep_fuel_price(net, params, sc, grid, cfg)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(
        {"network": args.network, "scenario": args.scenario, "params": args.params},
        {"min": _fmt(args.min), "max": _fmt(args.max), "step": _fmt(args.step)},
    )
    header = ["lambda_g"] + _sweep_flow_columns(net) + ["lambda_e", "c_env"]
    rows = []
    for lam_g, res in zip(grid, results):
        rows.append(
            [float(lam_g)] + _sweep_flow_values(net, res)
            + [res.unit_price, environmental_cost(net, res.flows)]
        )
    _write_csv(out / "sweep_fuel.csv", meta, header, rows)
    print(f"wrote {out / 'sweep_fuel.csv'} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_sweep_penetration(args) -> int:
    net, params, sc = _load_common(args)
    cfg = _config(args)
    weights = EnvWeights({args.arc: args.gamma}) if args.gamma != 1.0 else EnvWeights()
    shares = [float(v) for v in args.xe_grid.split(",") if v.strip()]
    try:
        rows_raw = sweep_ev_penetration(
            net, params, sc, weights, shares, args.arc, args.max, args.step, cfg
        )
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(
        {"network": args.network, "scenario": args.scenario, "params": args.params},
        {"arc": args.arc, "gamma": _fmt(args.gamma), "step": _fmt(args.step)},
    )
    header = ["x_e"] + _sweep_flow_columns(net) + [
        "lambda_e", "c_env", "best_toll", "gain"
    ]
    rows = []
    for rec in rows_raw:
        res = rec["equilibrium"]
        rows.append(
            [float(rec["x_e"])] + _sweep_flow_values(net, res)
            + [res.unit_price, environmental_cost(net, res.flows, weights),
               rec["best_toll"], rec["gain"]]
        )
    _write_csv(out / "sweep_penetration.csv", meta, header, rows)
    print(f"wrote {out / 'sweep_penetration.csv'} ({len(rows)} rows)")
    return EXIT_OK


# -- argument wiring ----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, need_network: bool = True) -> None:
    if need_network:
        p.add_argument("--network", required=True, help="network JSON file")
    p.add_argument("--scenario", required=True, help="charging scenario JSON file")
    p.add_argument("--params", default=None, help="class parameter JSON file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--gap-tol", type=float, default=1e-6, dest="gap_tol")
    p.add_argument("--max-iter", type=int, default=100_000, dest="max_iter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evwardrop",
        description=(
            "Two-class traffic equilibria with an endogenous electric "
            "charging price, toll search and load-profile audits."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute and certify one equilibrium")
    _add_common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("schedule", help="optimal charging schedule for one need")
    p.add_argument("--scenario", required=True)
    p.add_argument("--need", type=float, required=True, help="charging need (kWh)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("check-lambda", help="unit-price monotonicity test")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=_cmd_check_lambda)

    p = sub.add_parser("loadstats", help="monthly increasing-price fractions")
    p.add_argument("--input", required=True, help="hourly load CSV")
    p.add_argument("--T", default="2,4,8,24", help="comma list of slot counts")
    p.add_argument("--n", type=float, default=2.0, help="cost exponent")
    p.add_argument("--chrono", action="store_true",
                   help="bin hours chronologically instead of sorted")
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_loadstats)

    p = sub.add_parser("sweep-toll", help="exhaustive gasoline-toll search")
    _add_common(p)
    p.add_argument("--arc", default="a", help="tolled arc id")
    p.add_argument("--max", type=float, default=5.0, help="largest toll (EUR)")
    p.add_argument("--step", type=float, default=0.01, help="toll increment (EUR)")
    p.add_argument("--gamma", type=float, default=1.0,
                   help="environmental weight of the tolled arc")
    p.set_defaults(func=_cmd_sweep_toll)

    p = sub.add_parser("sweep-fuel", help="equilibria over a fuel-price grid")
    _add_common(p)
    p.add_argument("--min", type=float, default=0.5)
    p.add_argument("--max", type=float, default=1.6)
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=_cmd_sweep_fuel)

    p = sub.add_parser("sweep-penetration",
                       help="optimal toll per electric-fleet share")
    _add_common(p)
    p.add_argument("--arc", default="a")
    p.add_argument("--max", type=float, default=5.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--xe-grid", dest="xe_grid",
                   default=",".join(_fmt(v) for v in np.arange(0.05, 0.951, 0.05)),
                   help="comma list of EV shares")
    p.set_defaults(func=_cmd_sweep_penetration)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        # InputError and the domain validations both surface here
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
