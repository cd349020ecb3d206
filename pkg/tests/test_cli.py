import datetime as dt
import json
import math

import pytest

from evwardrop.cli import main

RING_KM = math.pi / 2.0 * 30.0


@pytest.fixture
def city_files(tmp_path):
    net = {
        "nodes": ["O", "D"],
        "arcs": [
            {"id": "a", "tail": "O", "head": "D", "length_km": 30.0,
             "capacity": 0.5, "speed_kmh": 50.0, "alpha": 2.0, "beta": 4.0},
            {"id": "b", "tail": "O", "head": "D", "length_km": RING_KM,
             "capacity": 1.0, "speed_kmh": 70.0, "alpha": 2.0, "beta": 4.0},
            {"id": "c", "tail": "O", "head": "D", "length_km": RING_KM,
             "capacity": 0.5, "speed_kmh": 70.0, "alpha": 2.0, "beta": 4.0},
        ],
        "od_pairs": [{"origin": "O", "destination": "D", "demand": 1.0}],
        "class_params": {"x_e": 0.5, "m_e": 0.2, "m_g": 0.06,
                         "lambda_g": 1.5, "tau": 10.0, "fleet_scale": 1.0},
    }
    scenario = {"n": 2, "eta": [0.01, 0.01], "ell0": [16.7, 25.6]}
    net_file = tmp_path / "net.json"
    sc_file = tmp_path / "scenario.json"
    net_file.write_text(json.dumps(net))
    sc_file.write_text(json.dumps(scenario))
    return net_file, sc_file


class TestSolve:
    def test_certified_run_exit_zero(self, city_files, tmp_path):
        net_file, sc_file = city_files
        out = tmp_path / "out"
        rc = main([
            "solve", "--network", str(net_file), "--scenario", str(sc_file),
            "--out", str(out),
        ])
        assert rc == 0
        payload = json.loads((out / "equilibrium.json").read_text())
        assert payload["certified"] is True
        assert payload["wardrop_residual"] <= 1e-5
        assert payload["relative_gap"] <= 1e-6
        flows = (out / "flows.csv").read_text().splitlines()
        assert flows[4] == "arc_id,class,flow,travel_time_h,cost_eur"
        assert len(flows) == 5 + 6  # header block + one row per arc and class

    def test_outputs_byte_identical(self, city_files, tmp_path):
        net_file, sc_file = city_files
        outs = []
        for name in ("o1", "o2"):
            out = tmp_path / name
            assert main([
                "solve", "--network", str(net_file), "--scenario", str(sc_file),
                "--out", str(out),
            ]) == 0
            outs.append(out)
        for artifact in ("equilibrium.json", "flows.csv"):
            a = (outs[0] / artifact).read_bytes()
            b = (outs[1] / artifact).read_bytes()
            assert a == b

    def test_malformed_network_exit_three(self, city_files, tmp_path, capsys):
        net_file, sc_file = city_files
        bad = json.loads(net_file.read_text())
        bad["arcs"][0]["lanes"] = 4
        net_file.write_text(json.dumps(bad))
        out = tmp_path / "out3"
        rc = main([
            "solve", "--network", str(net_file), "--scenario", str(sc_file),
            "--out", str(out),
        ])
        assert rc == 3
        assert "lanes" in capsys.readouterr().err
        assert not out.exists()  # validation failed before any output

    def test_iteration_starved_run_exit_two(self, city_files, tmp_path, capsys):
        net_file, sc_file = city_files
        out = tmp_path / "out2"
        rc = main([
            "solve", "--network", str(net_file), "--scenario", str(sc_file),
            "--out", str(out), "--max-iter", "1",
        ])
        assert rc == 2
        assert "no convergence" in capsys.readouterr().err
        payload = json.loads((out / "equilibrium.json").read_text())
        assert payload["certified"] is False  # partial result still saved


class TestChargingCommands:
    def test_check_lambda_reference_output(self, city_files, capsys):
        _, sc_file = city_files
        assert main(["check-lambda", "--scenario", str(sc_file)]) == 0
        out = capsys.readouterr().out.strip()
        assert out == '{"increasing": true, "ratio": 1.3225}'

    def test_schedule_prints_water_filling(self, city_files, capsys):
        _, sc_file = city_files
        assert main(["schedule", "--scenario", str(sc_file), "--need", "20"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["schedule_kwh"] == [14.45, 5.55]
        assert payload["active_slots"] == 2
        assert payload["unit_price_eur_per_kwh"] == pytest.approx(0.3115)

    def test_schedule_rejects_negative_need(self, city_files, capsys):
        _, sc_file = city_files
        rc = main(["schedule", "--scenario", str(sc_file), "--need", "-4"])
        assert rc == 3


class TestLoadstats:
    def test_flat_year_fractions_one(self, tmp_path, capsys):
        lines = ["date," + ",".join(f"h{i}" for i in range(24))]
        date = dt.date(2021, 1, 1)
        for _ in range(365):
            lines.append(date.isoformat() + "," + ",".join(["1.0"] * 24))
            date += dt.timedelta(days=1)
        data = tmp_path / "loads.csv"
        data.write_text("\n".join(lines) + "\n")
        out = tmp_path / "stats"
        rc = main([
            "loadstats", "--input", str(data), "--T", "2,4,8,24",
            "--out", str(out),
        ])
        assert rc == 0
        rows = [
            line for line in (out / "loadstats.csv").read_text().splitlines()
            if line and not line.startswith("#")
        ]
        assert rows[0] == "month,T,fraction,days_counted"
        body = [r.split(",") for r in rows[1:]]
        assert len(body) == 12 * 4
        assert all(r[2] == "1" for r in body)


class TestSweepCommands:
    def test_sweep_toll_writes_curve(self, city_files, tmp_path):
        net_file, sc_file = city_files
        out = tmp_path / "sw"
        rc = main([
            "sweep-toll", "--network", str(net_file), "--scenario", str(sc_file),
            "--out", str(out), "--arc", "a", "--max", "0.3", "--step", "0.1",
            "--gamma", "2.0",
        ])
        assert rc == 0
        lines = (out / "sweep_toll.csv").read_text().splitlines()
        header = next(l for l in lines if l.startswith("toll_eur"))
        assert header.split(",") == [
            "toll_eur", "flow_a_ev", "flow_a_gv", "flow_b_ev", "flow_b_gv",
            "flow_c_ev", "flow_c_gv", "lambda_e", "c_env", "best_toll", "gain",
        ]
        body = [l for l in lines if l and not l.startswith(("#", "toll_eur"))]
        assert len(body) == 4

    def test_sweep_fuel_small_grid(self, city_files, tmp_path):
        net_file, sc_file = city_files
        out = tmp_path / "fw"
        rc = main([
            "sweep-fuel", "--network", str(net_file), "--scenario", str(sc_file),
            "--out", str(out), "--min", "1.4", "--max", "1.5", "--step", "0.05",
        ])
        assert rc == 0
        body = [
            l for l in (out / "sweep_fuel.csv").read_text().splitlines()
            if l and not l.startswith(("#", "lambda_g"))
        ]
        assert len(body) == 3

    def test_sweep_penetration_small_grid(self, city_files, tmp_path):
        net_file, sc_file = city_files
        out = tmp_path / "pen"
        rc = main([
            "sweep-penetration", "--network", str(net_file),
            "--scenario", str(sc_file), "--out", str(out),
            "--max", "0.2", "--step", "0.1", "--gamma", "2.0",
            "--xe-grid", "0.4,0.8",
        ])
        assert rc == 0
        body = [
            l for l in (out / "sweep_penetration.csv").read_text().splitlines()
            if l and not l.startswith(("#", "x_e"))
        ]
        assert len(body) == 2
