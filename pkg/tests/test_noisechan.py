import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ftqml.noisechan import (
    CrosstalkSpec,
    DepolarizingSpec,
    ErrorBridgeParams,
    NoiseSite,
    PauliInjectionSpec,
    TCountScaling,
    crosstalk_channel,
    depol_from_gate_error,
    depolarizing_channel,
    draw_paulis,
    effective_gate_error,
    gate_error_from_t_error,
    inject_pauli_noise,
    t_count_per_rotation,
    two_qubit_gate_noise,
)
from ftqml.simcore import PureState, apply_channel, channel_to_superoperator, is_cptp
from ftqml.simcore.states import DensityMatrix


def test_depolarizing_bloch_shrink():
    p = 0.3
    rho = DensityMatrix(1, np.array([[1, 0], [0, 0]], dtype=complex))
    out = apply_channel(rho, depolarizing_channel(p), [0]).matrix
    assert np.isclose(out[0, 0] - out[1, 1], 1 - 4 * p / 3)


def test_depolarizing_range_checked():
    with pytest.raises(ValueError):
        DepolarizingSpec(1.5)
    with pytest.raises(ValueError):
        depol_from_gate_error(0.3)


@given(st.floats(0, 0.7))
def test_gate_error_inversion(p):
    assert np.isclose(depol_from_gate_error(effective_gate_error(p)), p, atol=1e-12)


def test_bridge_values():
    assert abs(effective_gate_error(2.99e-3) / 1.99e-3 - 1) <= 5e-3
    assert abs(gate_error_from_t_error(ErrorBridgeParams(1e-4, 1e-4, "improved")) / 1.33e-3 - 1) <= 1e-2


def test_t_count_scalings_ordered():
    eps = 1e-5
    assert t_count_per_rotation(eps, TCountScaling.IMPROVED) < t_count_per_rotation(eps, TCountScaling.CLASSIC)


def test_crosstalk_is_cptp_and_symmetric_in_sign():
    for a in (-0.5, 0.0, 0.01, 0.8):
        sup = channel_to_superoperator(crosstalk_channel(CrosstalkSpec(a), 0, 1))
        assert is_cptp(sup)


def test_two_qubit_noise_without_edge_is_depolarizing_only():
    spec = CrosstalkSpec(0.2, neighbor_map={0: (1,), 1: (0,), 2: ()})
    sup, support = two_qubit_gate_noise(0, 2, DepolarizingSpec(0.1), spec)
    assert is_cptp(sup)
    assert sorted(support) == [0, 2]
    with pytest.raises(ValueError):
        two_qubit_gate_noise(0, 1, DepolarizingSpec(0.8), spec)


def test_site_rates_follow_multipliers():
    spec = PauliInjectionSpec(0.01, two_qubit_multiplier=2, f_anc=0.5)
    assert spec.site_rate(False, False) == 0.01
    assert np.isclose(spec.site_rate(True, False), 0.02)
    assert np.isclose(spec.site_rate(True, True), 0.01)


def test_draw_frequency_and_pauli_mix():
    spec = PauliInjectionSpec(0.2)
    sites = [NoiseSite(0, q, "gate1") for q in range(2000)]
    got = draw_paulis(sites, spec, np.random.default_rng(0))
    assert abs(len(got) / 2000 - 0.2) < 0.03
    kinds = {inj.pauli for inj in got}
    assert kinds == {"X", "Y", "Z"}


def test_inject_applies_logged_paulis():
    spec = PauliInjectionSpec(0.5, two_qubit_multiplier=1)
    sites = [NoiseSite(0, 0, "gate1")]
    for seed in range(20):
        state, log = inject_pauli_noise(PureState.zero(2), sites, spec, np.random.default_rng(seed))
        if log:
            break
    assert len(log) == 1
    flipped = log[0].pauli in ("X", "Y")
    assert np.isclose(state.probabilities()[2], 1.0 if flipped else 0.0)
