import math

import pytest

from bmvq import PowerProfile
from bmvq.validation import (
    DEFAULT_INVERSE_LV,
    DEFAULT_LAMBDAS,
    ErrorReport,
    ValidationGrid,
    run_validation,
    write_validation_csv,
)


def test_default_grid_is_99_instances():
    grid = ValidationGrid()
    assert grid.size == 99
    assert len(DEFAULT_LAMBDAS) == 11
    assert len(grid.lv_values) == 9
    # the vacation lengths follow 1/L_v = 0.1 + 0.05 i, i = 1..9
    assert grid.lv_values[0] == pytest.approx(1 / 0.15)
    assert grid.lv_values[-1] == pytest.approx(1 / 0.55)
    assert DEFAULT_INVERSE_LV == tuple(round(0.1 + 0.05 * i, 2) for i in range(1, 10))
    assert grid.n_stages == 4 and grid.mu == 0.8


def test_error_report_statistics_recomputed_from_rows():
    rows = [(0.1, 2.0, 1.0, 1.1, abs(1.0 - 1.1) / 1.1),
            (0.2, 2.0, 2.0, 1.9, abs(2.0 - 1.9) / 1.9)]
    rep = ErrorReport.from_pairs("NE", rows)
    errs = [r[4] for r in rows]
    mean = sum(errs) / 2
    var = sum((e - mean) ** 2 for e in errs) / 2
    assert rep.mean_error == pytest.approx(mean, abs=1e-12)
    assert rep.std_error == pytest.approx(math.sqrt(var), abs=1e-12)


def test_degenerate_grid_uniform_power_gives_zero_energy_error(tmp_path):
    # ps = pa forces NE = 1 on both paths, so the energy error vanishes to
    # simulator precision; the delay error at this heavy-traffic instance is
    # the model's known underestimate, only bounded loosely here
    grid = ValidationGrid(lambdas=(0.3,), lv_values=(0.8,), n_stages=3)
    power = PowerProfile(p_active=130.0, stage_powers=(130.0,) * 3)
    ne_rep, w_rep, rows = run_validation(grid, base_seed=5, reps=4,
                                         horizon_arrivals=3e4, power=power)
    assert len(rows) == 1 and rows[0].error is None
    assert ne_rep.mean_error == pytest.approx(0.0, abs=1e-9)
    assert w_rep.mean_error < 0.2
    write_validation_csv(tmp_path / "v.csv", rows)
    header = (tmp_path / "v.csv").read_text().splitlines()[0]
    assert header.startswith("lambda,lv,ne_analytic,ne_sim")


def test_harness_survives_instance_failure(monkeypatch):
    import bmvq.validation as val

    real = val.expected_waiting_time
    calls = {"n": 0}

    def sometimes_broken(config, engine=None, epsilon=1e-9):
        calls["n"] += 1
        if calls["n"] == 1:
            raise RuntimeError("injected")
        return real(config, engine, epsilon)

    monkeypatch.setattr(val, "expected_waiting_time", sometimes_broken)
    grid = ValidationGrid(lambdas=(0.3, 0.35), lv_values=(0.8,), n_stages=2)
    ne_rep, w_rep, rows = run_validation(grid, base_seed=9, reps=2,
                                         horizon_arrivals=5e3)
    assert len(rows) == 2
    assert rows[0].error == "injected"
    assert rows[1].error is None
    assert len(ne_rep.rows) == 1  # failed instance excluded from statistics


def test_report_serialization_shape():
    rows = [(0.1, 2.0, 1.0, 1.1, 0.0909)]
    d = ErrorReport.from_pairs("W", rows).to_json_dict()
    assert d["metric"] == "W"
    assert d["rows"][0]["lambda"] == 0.1
