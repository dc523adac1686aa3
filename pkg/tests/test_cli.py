import json
import math

import pytest

from foldfold.cli import main


def run_to_dir(tmp_path, *argv):
    out = tmp_path / "out"
    rc = main(list(argv) + ["--out", str(out)])
    return rc, out


def test_classify_json(tmp_path):
    rc, out = run_to_dir(tmp_path, "classify", "--scenario", "ii-basic")
    assert rc == 0
    payload = json.loads((out / "ii-basic_classify.json").read_text())
    assert payload["visX"] == "invisible"
    assert payload["muZ"] == pytest.approx(4.0 / 3.0)
    assert payload["case"] == "B"


def test_classify_unknown_scenario_usage_error(capsys):
    assert main(["classify", "--scenario", "nope"]) == 2
    assert "unknown scenario" in capsys.readouterr().err


def test_curves_json_and_csv(tmp_path):
    rc, out = run_to_dir(tmp_path, "curves", "--scenario", "vi-basic",
                         "--phi", "quintic-b")
    assert rc == 0
    payload = json.loads((out / "vi-basic_quintic-b_curves.json").read_text())
    assert payload["D_coeff"] == pytest.approx(9.0 / 32.0)
    assert payload["delta_H"] == pytest.approx(11.0 / 3.0)
    assert payload["delta_C"] == pytest.approx(1.98, abs=0.01)
    assert payload["hopf_criticality"] == "supercritical"
    for eps, alpha_h in payload["numeric_H"]:
        assert alpha_h == pytest.approx(payload["delta_H"] * eps, abs=40 * eps**2)

    rc, out = run_to_dir(tmp_path, "curves", "--scenario", "ii-basic",
                         "--phi", "cubic", "--format", "csv")
    rows = (out / "ii-basic_cubic_curves.csv").read_text().strip().splitlines()
    assert rows[0] == "epsilon,alpha_D_minus,alpha_D_plus,alpha_H,alpha_C"
    eps, adm, adp, ah, ac = rows[1].split(",")
    assert float(adp) == pytest.approx(math.sqrt(float(eps) / (3.0 / 32.0)))
    assert float(ah) == pytest.approx(4.0 / 3.0 * float(eps))
    assert ac == ""     # no canard line for the invisible-invisible fold


def test_manifold_csv(tmp_path):
    rc, out = run_to_dir(tmp_path, "manifold", "--scenario", "ii-basic",
                         "--alpha", "-0.01", "--epsilon", "0.001")
    rows = (out / "ii-basic_cubic_manifold.csv").read_text().strip().splitlines()
    assert rows[0] == "x,m0,stability"
    assert len(rows) == 201
    xs = [float(r.split(",")[0]) for r in rows[1:]]
    vs = [float(r.split(",")[1]) for r in rows[1:]]
    assert all(r.split(",")[2] == "attracting" for r in rows[1:])
    assert min(vs) > -1.0 - 1e-9 and max(vs) < 1.0 + 1e-9


def test_melnikov_summary(tmp_path):
    rc, out = run_to_dir(tmp_path, "melnikov", "--scenario", "ii-basic",
                         "--phi", "quintic", "--n", "40",
                         "--delta", "4.0")
    assert rc == 0
    summary = json.loads((out / "ii-basic_quintic_melnikov.json").read_text())
    assert summary["criticality"] == "subcritical"
    assert summary["delta_H"] == pytest.approx(4.0)
    sn = summary["saddle_node"]
    assert 0.011 < sn["delta"] * 0.006 < 0.012
    rows = (out / "ii-basic_quintic_melnikov.csv").read_text().strip().splitlines()
    assert rows[0] == "delta,v0,M"
    assert len(rows) == 41


def test_canard_command(tmp_path):
    rc, out = run_to_dir(tmp_path, "canard", "--scenario", "vi-basic",
                         "--phi", "cubic", "--epsilon", "0.001")
    payload = json.loads((out / "vi-basic_cubic_canard.json").read_text())
    assert payload["delta_C_closed"] == pytest.approx(1.2155, abs=1e-3)
    eps, dc = payload["delta_C_numeric"][0]
    assert abs(dc - payload["delta_C_closed"]) <= 3.0 * math.sqrt(eps)


def test_simulate_outputs(tmp_path):
    rc, out = run_to_dir(tmp_path, "simulate", "--scenario", "ii-basic",
                         "--alpha", "0.0", "--epsilon", "0.006",
                         "--x0", "-0.3", "--v0", "1.0", "--time", "80")
    rows = (out / "ii-basic_cubic_trajectory.csv").read_text().strip().splitlines()
    assert rows[0] == "t,x,v"
    events = json.loads((out / "ii-basic_cubic_events.json").read_text())
    assert any(e["which"] == "v=-1" for e in events)


def test_portrait_svg(tmp_path):
    rc, out = run_to_dir(tmp_path, "portrait", "--scenario", "ii-basic",
                         "--alpha", "0.01", "--epsilon", "0.006",
                         "--grid", "2", "--time", "3")
    svg = (out / "ii-basic_cubic_portrait.svg").read_text()
    assert svg.startswith("<svg")
    assert "<polyline" in svg


def test_sweep_orbit_count_flips_at_hopf(tmp_path):
    rc, out = run_to_dir(tmp_path, "sweep", "--scenario", "ii-basic",
                         "--epsilon", "0.006",
                         "--alpha-min", "-0.05", "--alpha-max", "0.05", "--n", "21")
    assert rc == 0
    rows = (out / "ii-basic_cubic_sweep.csv").read_text().strip().splitlines()
    assert rows[0] == "alpha,kind,n_orbits,stabilities"
    table = {}
    for row in rows[1:]:
        alpha, kind, n_orbits, stab = row.split(",")
        table[round(float(alpha), 4)] = (kind, int(n_orbits), stab)
    # alpha_H ~ 0.008: count flips between the bracketing rows
    assert table[0.005][1] == 0
    assert table[0.01][1] == 1
    assert table[0.01][2] == "attracting"
    assert all(table[a][1] == 0 for a in (-0.05, -0.01, 0.0))
    assert all(table[a][1] == 1 for a in (0.02, 0.05))


def test_sweep_two_orbit_window_subcritical(tmp_path):
    rc, out = run_to_dir(tmp_path, "sweep", "--scenario", "ii-basic",
                         "--phi", "quintic", "--epsilon", "0.006",
                         "--alpha-min", "0.013", "--alpha-max", "0.021", "--n", "5")
    rows = (out / "ii-basic_quintic_sweep.csv").read_text().strip().splitlines()
    counts = {round(float(r.split(",")[0]), 4): int(r.split(",")[2]) for r in rows[1:]}
    # alpha_S ~ 0.0118, alpha_H = 0.024: a two-orbit window in between
    assert counts[0.015] == 2
    assert counts[0.019] == 2


def test_sweep_empty_range(tmp_path):
    rc, out = run_to_dir(tmp_path, "sweep", "--scenario", "ii-basic",
                         "--epsilon", "0.006", "--n", "0")
    rows = (out / "ii-basic_cubic_sweep.csv").read_text().splitlines()
    assert rows == ["alpha,kind,n_orbits,stabilities"]


def test_reproduce_all_pass():
    for ex_id in ("3.1", "4.3", "4.6"):
        assert main(["reproduce", ex_id]) == 0


def test_reproduce_unknown_example():
    assert main(["reproduce", "9.9"]) == 2


def test_deterministic_output(tmp_path):
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        main(["curves", "--scenario", "ii-basic", "--out", str(out)])
        outs.append((out / "ii-basic_cubic_curves.json").read_bytes())
    assert outs[0] == outs[1]


def test_scenario_file_loading(tmp_path):
    payload = {
        "id": "custom-ii",
        "fields": {
            "X1": {"1": 1.0, "x": -2.0},
            "X2": {"x": -1.0, "a": 1.0},
            "Y1": {"1": -1.0},
            "Y2": {"x": -1.0},
        },
        "phi": "cubic",
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(payload))
    out = tmp_path / "out"
    rc = main(["classify", "--scenario-file", str(path), "--out", str(out)])
    assert rc == 0
    diag = json.loads((out / "custom-ii_classify.json").read_text())
    assert diag["muZ"] == pytest.approx(4.0 / 3.0)
