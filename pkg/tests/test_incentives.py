import os

import numpy as np
import pytest

from evwardrop.equilibrium import solve_equilibrium
from evwardrop.incentives import (
    EnvWeights,
    environmental_cost,
    optimize_toll,
    sweep_ev_penetration,
    sweep_fuel_price,
    thread_budget,
)
from evwardrop.network import (
    GV,
    Arc,
    ClassParams,
    FlowAssignment,
    InputError,
    ODPair,
    RoadNetwork,
    build_parallel_network,
    travel_time,
)


@pytest.fixture
def single_arc_net():
    arcs = [Arc("only", "O", "D", 25.0, 1.0, 50.0)]
    return RoadNetwork(["O", "D"], arcs, [ODPair("O", "D", 1.0)])


class TestEnvironmentalCost:
    def test_no_gasoline_no_cost(self, city_network):
        mat = np.zeros((3, 2))
        mat[:, 0] = [0.4, 0.4, 0.2]  # only electric traffic
        flows = FlowAssignment(city_network, mat)
        assert environmental_cost(city_network, flows) == 0.0

    def test_weight_scales_one_arc_only(self, city_network):
        mat = np.zeros((3, 2))
        mat[:, 1] = [0.3, 0.2, 0.1]
        flows = FlowAssignment(city_network, mat)
        base = environmental_cost(city_network, flows)
        weighted = environmental_cost(city_network, flows, EnvWeights({"a": 2.0}))
        arc_a_term = 0.3 * travel_time(city_network.arcs[0], 0.3)
        assert weighted - base == pytest.approx(arc_a_term, rel=1e-12)

    def test_matches_hand_evaluation_at_equilibrium(
        self, city_network, city_params, city_scenario
    ):
        res = solve_equilibrium(city_network, city_params, city_scenario)
        got = environmental_cost(city_network, res.flows)
        want = sum(
            float(res.flows.class_vector(GV)[i])
            * travel_time(city_network.arcs[i], float(res.flows.totals[i]))
            for i in range(3)
        )
        assert got == pytest.approx(want, rel=1e-12)

    def test_weights_below_one_rejected(self):
        with pytest.raises(InputError):
            EnvWeights({"a": 0.5})


class TestOptimizeToll:
    def test_single_arc_toll_changes_nothing(self, single_arc_net, city_params, city_scenario):
        sweep = optimize_toll(
            single_arc_net, city_params, city_scenario,
            tolled_arc="only", toll_max=0.5, increment=0.1,
        )
        assert sweep.best_toll == 0.0
        assert sweep.gain == 0.0
        assert len(set(round(c, 12) for c in sweep.env_costs)) == 1

    def test_grid_is_exhaustive(self, single_arc_net, city_params, city_scenario):
        sweep = optimize_toll(
            single_arc_net, city_params, city_scenario,
            tolled_arc="only", toll_max=0.35, increment=0.1,
        )
        assert sweep.toll_grid == (0.0, 0.1, 0.2, 0.3)

    def test_best_cost_reproducible(self, city_network, city_params, city_scenario):
        sweep = optimize_toll(
            city_network, city_params, city_scenario, EnvWeights({"a": 2.0}),
            tolled_arc="a", toll_max=1.2, increment=0.2,
        )
        tolled = city_network.with_toll("a", GV, sweep.best_toll)
        fresh = solve_equilibrium(tolled, city_params, city_scenario)
        again = environmental_cost(city_network, fresh.flows, EnvWeights({"a": 2.0}))
        assert again == pytest.approx(sweep.best_cost, rel=1e-6)
        assert sweep.best_cost == min(sweep.env_costs)

    def test_gain_zero_iff_zero_toll_optimal(self, single_arc_net, city_params, city_scenario):
        sweep = optimize_toll(
            single_arc_net, city_params, city_scenario,
            tolled_arc="only", toll_max=0.2, increment=0.1,
        )
        assert sweep.best_toll == 0.0 and sweep.gain == 0.0

    def test_unknown_arc(self, city_network, city_params, city_scenario):
        with pytest.raises(InputError):
            optimize_toll(city_network, city_params, city_scenario, tolled_arc="zz")

    def test_higher_weight_never_lowers_best_toll(
        self, city_network, city_params, city_scenario
    ):
        tolls = []
        for gamma in (1.0, 2.0):
            sweep = optimize_toll(
                city_network, city_params, city_scenario, EnvWeights({"a": gamma}),
                tolled_arc="a", toll_max=2.0, increment=0.1,
            )
            tolls.append(sweep.best_toll)
        assert tolls[1] >= tolls[0]


class TestSweeps:
    def test_fuel_sweep_propagates_price(self, city_network, city_params, city_scenario):
        grid = [1.3, 1.4, 1.5]
        results = sweep_fuel_price(city_network, city_params, city_scenario, grid)
        assert len(results) == 3
        for res in results:
            assert res.certified

    def test_fuel_sweep_rejects_nonpositive(self, city_network, city_params, city_scenario):
        with pytest.raises(InputError):
            sweep_fuel_price(city_network, city_params, city_scenario, [0.0, 1.0])

    def test_penetration_all_electric_no_gain(self, city_network, city_params, city_scenario):
        rows = sweep_ev_penetration(
            city_network, city_params, city_scenario, EnvWeights({"a": 2.0}),
            x_e_grid=[1.0], toll_max=0.3, increment=0.1,
        )
        assert rows[0]["gain"] == 0.0

    def test_penetration_row_shape(self, city_network, city_params, city_scenario):
        rows = sweep_ev_penetration(
            city_network, city_params, city_scenario,
            x_e_grid=[0.4, 0.6], toll_max=0.2, increment=0.1,
        )
        assert [r["x_e"] for r in rows] == [0.4, 0.6]
        for r in rows:
            assert r["equilibrium"].certified


class TestConcurrency:
    def test_thread_budget_parsing(self, monkeypatch):
        monkeypatch.delenv("EVW_THREADS", raising=False)
        assert thread_budget() == 0
        monkeypatch.setenv("EVW_THREADS", "4")
        assert thread_budget() == 4
        monkeypatch.setenv("EVW_THREADS", "zero")
        with pytest.raises(InputError):
            thread_budget()

    def test_parallel_toll_sweep_matches_sequential(
        self, city_network, city_params, city_scenario, monkeypatch
    ):
        monkeypatch.delenv("EVW_THREADS", raising=False)
        seq = optimize_toll(
            city_network, city_params, city_scenario, EnvWeights({"a": 2.0}),
            tolled_arc="a", toll_max=0.4, increment=0.1,
        )
        monkeypatch.setenv("EVW_THREADS", "2")
        par = optimize_toll(
            city_network, city_params, city_scenario, EnvWeights({"a": 2.0}),
            tolled_arc="a", toll_max=0.4, increment=0.1,
        )
        assert par.toll_grid == seq.toll_grid
        assert par.best_toll == seq.best_toll
        assert np.allclose(par.env_costs, seq.env_costs, atol=1e-8)
