"""Two-class traffic equilibria with endogenous electric charging prices.

The package couples a static traffic assignment over a road network with
a closed-form charging scheduler: the electricity price electric
vehicles pay depends on the fleet-wide charging need, which itself
depends on everyone's routing, and the equilibrium of that loop is
computed by minimizing a convex potential.  On top sit toll design
against an environmental objective and audits of household load data
for the condition that keeps the equilibrium unique.
"""

from .charging import (
    ChargingScenario,
    ChargingSchedule,
    PriceMonotonicity,
    charging_unit_price,
    energy_thresholds,
    is_price_increasing,
    lambda_integral,
    optimal_cost,
    order_slots,
    price_derivative_sign_scan,
    schedule_charging,
    unit_price_curve,
)
from .equilibrium import (
    EquilibriumConfig,
    EquilibriumResult,
    SolverError,
    WardropCheck,
    beckmann_gradient,
    beckmann_potential,
    enumerate_parallel_equilibrium,
    random_feasible_assignment,
    solve_equilibrium,
    verify_wardrop,
)
from .incentives import (
    EnvWeights,
    TollSweepResult,
    environmental_cost,
    optimize_toll,
    sweep_ev_penetration,
    sweep_fuel_price,
)
from .loaddata import (
    LoadDataset,
    MonthlyFraction,
    SlotProfile,
    aggregate_day_to_slots,
    monthly_increasing_fraction,
    parse_load_csv,
)
from .network import (
    CLASSES,
    EV,
    GV,
    Arc,
    ClassParams,
    FlowAssignment,
    InputError,
    ODPair,
    RoadNetwork,
    arc_flows_from_path_flows,
    arc_generalized_cost,
    build_parallel_network,
    enumerate_paths,
    fleet_scale_for_energy_fraction,
    load_class_params_json,
    load_network_json,
    load_scenario_json,
    path_cost,
    shortest_path,
    total_class_energy,
    travel_time,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # charging
    "ChargingScenario", "ChargingSchedule", "PriceMonotonicity",
    "order_slots", "energy_thresholds", "schedule_charging", "optimal_cost",
    "charging_unit_price", "unit_price_curve", "is_price_increasing",
    "price_derivative_sign_scan", "lambda_integral",
    # network
    "EV", "GV", "CLASSES", "Arc", "ODPair", "ClassParams", "RoadNetwork",
    "FlowAssignment", "InputError", "travel_time", "arc_generalized_cost",
    "path_cost", "total_class_energy", "arc_flows_from_path_flows",
    "shortest_path", "build_parallel_network", "enumerate_paths",
    "load_network_json", "load_class_params_json", "load_scenario_json",
    "fleet_scale_for_energy_fraction",
    # equilibrium
    "EquilibriumConfig", "EquilibriumResult", "SolverError", "WardropCheck",
    "beckmann_potential", "beckmann_gradient", "solve_equilibrium",
    "verify_wardrop", "enumerate_parallel_equilibrium",
    "random_feasible_assignment",
    # incentives
    "EnvWeights", "TollSweepResult", "environmental_cost", "optimize_toll",
    "sweep_fuel_price", "sweep_ev_penetration",
    # load data
    "LoadDataset", "SlotProfile", "MonthlyFraction", "parse_load_csv",
    "aggregate_day_to_slots", "monthly_increasing_fraction",
]
