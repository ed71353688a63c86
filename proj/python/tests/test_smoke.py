import math
import pathlib

import pytest

import mobius_geofence as mg

PRESETS = pathlib.Path(__file__).resolve().parents[2] / "presets"


def test_roots():
    small, large = mg.solve_roots(0.5, math.sqrt(2.5))
    assert small == pytest.approx(0.5, abs=1e-12)
    assert large == pytest.approx(2.0, abs=1e-12)


def test_map_round_trip_and_concentric_images():
    m = mg.build_map(0.5, math.sqrt(2.5), "larger")
    assert m["delta_T"] == pytest.approx(0.4189, abs=5e-5)
    z = complex(0.3, -0.7)
    w = mg.forward(0.5, math.sqrt(2.5), "larger", z)
    assert abs(mg.inverse(0.5, math.sqrt(2.5), "larger", w) - z) < 1e-13
    edge = mg.forward(0.5, math.sqrt(2.5), "larger", complex(0.5 + math.sqrt(2.5), 0.0))
    assert abs(edge) == pytest.approx(m["radius_boundary"], rel=1e-12)


def test_transformed_initial_state():
    rho, gamma = mg.to_transformed(0.5, math.sqrt(2.5), "smaller", complex(-0.9, -0.6653), math.radians(-60))
    assert rho.real == pytest.approx(0.0016, abs=5e-4)
    assert rho.imag == pytest.approx(-0.6039, abs=5e-4)
    assert math.degrees(gamma) == pytest.approx(2.3326, abs=1e-3)


def test_feasibility_and_simulation():
    cfg = mg.load_config(PRESETS / "example1_smaller.json")
    cfg["integration"]["t_final"] = 20.0
    report = mg.feasibility(cfg)
    assert report["feasible"]
    summary, cols = mg.simulate(cfg)
    assert summary["summary"]["containment_violations"] == 0
    assert len(cols["t"]) == len(cols["omega"]) > 10
    assert all(c == 1.0 for c in cols["contained"])


def test_bad_input_raises():
    with pytest.raises(mg.GeofenceError):
        mg.simulate({"schema_version": 99})
    with pytest.raises(mg.GeofenceError):
        mg.build_map(0.5, 1.5)


def test_wheel_speeds():
    right, left, saturated = mg.wheel_speeds(0.5, 0.5)
    assert right == pytest.approx(0.52635, abs=1e-15)
    assert left == pytest.approx(0.47365, abs=1e-15)
    assert not saturated


def test_verify_small_run():
    results = mg.verify(samples=50)
    assert all(r["passed"] or r["informational"] for r in results)
    mutated = mg.verify(samples=50, mutate_alpha=True)
    assert not next(r for r in mutated if r["name"] == "cross_law_omega")["passed"]
