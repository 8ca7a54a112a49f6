import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ftqml import costmodel as cm


def test_logical_error_rate_formula():
    p = cm.CodeParams(p_phys=1e-3)
    assert cm.logical_error_rate(15, p) == pytest.approx(3.0e-10, rel=1e-12)
    assert cm.logical_error_rate(17, p) == pytest.approx(3.0e-11, rel=1e-12)
    with pytest.raises(ValueError):
        cm.logical_error_rate(16, p)


@given(st.floats(1e-6, 0.5))
def test_budget_split_sums(total):
    b = cm.split_budget(total)
    assert b.epsilon_log + b.epsilon_dis + b.epsilon_syn == pytest.approx(total)


def test_budget_split_rejects_bad_policy():
    with pytest.raises(ValueError):
        cm.split_budget(1e-3, (0.5, 0.6, -0.1))
    with pytest.raises(ValueError):
        cm.split_budget(0.0)


@pytest.mark.parametrize("idx", range(4))
def test_table_rows(idx):
    item = cm.table1_estimates()[idx]
    row, est = item["row"], item["estimate"]
    assert est.code_distance == row["d"]
    assert est.data_qubits == row["data_qubits"]
    assert est.cycle_time_us == pytest.approx(0.4 * row["d"])
    assert est.runtime_ms == pytest.approx(row["runtime_ms"], rel=0.05)
    assert item["no_distillation"].factory_qubits == 6 * 10 * row["d"] ** 2


def test_distance_grows_with_budget_tightness():
    shape = cm.CircuitShape()
    loose = cm.estimate(shape, 1e-2)
    tight = cm.estimate(shape, 1e-6, distillation="fixture-0.0001")
    assert tight.code_distance > loose.code_distance


def test_free_selection_prefers_cheapest_feasible():
    est = cm.estimate(cm.CircuitShape(layers=50), 1e-3)
    assert est.t_budget_met
    assert est.distillation != "none"


def test_infeasible_budget_explains():
    with pytest.raises(cm.InfeasibleBudget, match="T gates"):
        cm.estimate(cm.CircuitShape(), 1e-9, cm.CodeParams(p_phys=9e-3))
    with pytest.raises(cm.InfeasibleBudget, match="distance"):
        cm.choose_distance(1e-30, 1e6, cm.CodeParams(p_phys=9.9e-3))


def test_no_distillation_flags_budget():
    est = cm.estimate(cm.CircuitShape(), 1e-3, distill=False)
    assert est.distillation == "none" and not est.t_budget_met


def test_layer_calibration_interpolates():
    cal = cm.LayerCalibration(((50, 4060), (100, 8410)))
    assert cal(75) == pytest.approx(6235)
    assert cal(150) == pytest.approx(12760)


def test_failure_probability_small_rates():
    assert cm.failure_probability(1e-18, 1e3) == pytest.approx(1e-15, rel=1e-9)
    assert cm.failure_probability(1.0, 3) == 1.0


def test_estimate_round_trips(tmp_path):
    est = cm.estimate(cm.CircuitShape(), 1e-3)
    d = json.loads(json.dumps(est.to_dict()))
    assert d["schema_version"] == cm.SCHEMA_VERSION
    assert cm.ResourceEstimate.from_dict(d) == est
    doc = cm.emit_fixtures(tmp_path / "fx.json")
    assert json.loads((tmp_path / "fx.json").read_text()) == json.loads(json.dumps(doc))


def test_unknown_catalog_entry():
    with pytest.raises(KeyError):
        cm.catalog_entry("nope")
