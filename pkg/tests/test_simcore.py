import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftqml.simcore import (
    CircuitIR,
    DensityMatrix,
    DimensionMismatch,
    KrausChannel,
    PureState,
    QubitIndexError,
    Register,
    ShotOutcome,
    apply_channel,
    apply_gate,
    apply_superoperator,
    batched,
    channel_to_superoperator,
    embed_operator,
    embed_superoperator,
    is_cptp,
    measure_z_expectation,
    partial_trace,
    run_circuit,
    sample_bitstrings,
    shot_uniforms,
)
from ftqml.simcore import gates as G
from ftqml.validation import random_channel, random_density

angles = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)


def test_basis_ordering_puts_qubit_zero_first():
    s = PureState.basis([1, 0, 0])
    assert np.argmax(np.abs(s.amplitudes)) == 4
    assert measure_z_expectation(s, 0) == -1.0
    assert measure_z_expectation(s, 2) == 1.0


def test_bad_targets_raise():
    s = PureState.zero(2)
    with pytest.raises(QubitIndexError):
        apply_gate(s, G.X, [3])
    with pytest.raises(DimensionMismatch):
        apply_gate(s, G.CNOT, [0])


@given(angles)
def test_half_angle_rotations(theta):
    np.testing.assert_allclose(G.rx(theta), np.cos(theta / 2) * G.I2 - 1j * np.sin(theta / 2) * G.X, atol=1e-12)
    np.testing.assert_allclose(G.rz(theta) @ G.rz(-theta), G.I2, atol=1e-12)


@given(angles, angles)
@settings(max_examples=25)
def test_pure_and_density_paths_agree(a, b):
    psi = PureState.zero(2)
    rho = psi.to_density()
    for state in (psi, rho):
        state = apply_gate(state, G.ry(a), [0])
        state = apply_gate(state, G.CNOT, [0, 1])
        state = apply_gate(state, G.rx(b), [1])
        if isinstance(state, PureState):
            p_pure = state.probabilities()
        else:
            p_mixed = state.probabilities()
    np.testing.assert_allclose(p_pure, p_mixed, atol=1e-12)


def test_embed_operator_matches_apply_gate():
    rng = np.random.default_rng(0)
    rho = random_density(3, rng)
    u = G.CNOT
    full = embed_operator(u, [2, 0], 3)
    want = full @ rho.matrix @ full.conj().T
    np.testing.assert_allclose(apply_gate(rho, u, [2, 0]).matrix, want, atol=1e-12)


def test_channel_paths_agree_on_subregister():
    rng = np.random.default_rng(1)
    rho = random_density(3, rng)
    ch = random_channel(1, rng)
    a = apply_channel(rho, ch, [1]).matrix
    b = apply_superoperator(rho, channel_to_superoperator(ch), [1]).matrix
    np.testing.assert_allclose(a, b, atol=1e-12)
    big = embed_superoperator(channel_to_superoperator(ch), [1], 3)
    assert is_cptp(big)


def test_non_cptp_rejected():
    with pytest.raises(ValueError):
        KrausChannel((2 * np.eye(2),), "bad")


def test_partial_trace_of_product():
    a = random_density(1, np.random.default_rng(2)).matrix
    b = random_density(1, np.random.default_rng(3)).matrix
    rho = DensityMatrix(2, np.kron(a, b))
    np.testing.assert_allclose(partial_trace(rho, [1]).matrix, b, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, a, atol=1e-12)


def test_shot_streams_are_counter_based():
    full = shot_uniforms(5, 0, 3000)
    np.testing.assert_array_equal(full[1500:2200], shot_uniforms(5, 1500, 700))
    assert not np.array_equal(full[:10], shot_uniforms(6, 0, 10))


def test_sampled_expectation_converges():
    s = apply_gate(PureState.zero(1), G.ry(1.0), [0])
    exact = measure_z_expectation(s, 0)
    est = measure_z_expectation(s, 0, shots=20000, rng_seed=3)
    assert abs(est - exact) < 4 / np.sqrt(20000)
    counts = sample_bitstrings(s, 100, 3)
    assert sum(counts.values()) == 100 and set(counts) <= {"0", "1"}


def test_circuit_ir_runs_with_bindings():
    ir = CircuitIR([Register("q", 0, 2)], parameters=("t",))
    ir.add("ry", 0, param="t")
    ir.add("cnot", 0, 1)
    ir.validate()
    out = run_circuit(ir, PureState.zero(2), {"t": np.pi})
    np.testing.assert_allclose(out.probabilities(), [0, 0, 0, 1], atol=1e-12)


def test_batched_kernels_match_single_state():
    rng = np.random.default_rng(4)
    rhos = np.stack([random_density(2, rng).matrix for _ in range(3)])
    u = G.ry(0.4)
    got = batched.unitary(rhos.reshape(3, 2, 2, 2, 2), u, [1], 2).reshape(3, 4, 4)
    for k in range(3):
        want = apply_gate(DensityMatrix(2, rhos[k]), u, [1]).matrix
        np.testing.assert_allclose(got[k], want, atol=1e-12)
    dep = batched.depolarize(rhos.reshape(3, 2, 2, 2, 2), 0, 0.3, 2).reshape(3, 4, 4)
    from ftqml.noisechan import depolarizing_channel
    want = apply_channel(DensityMatrix(2, rhos[0]), depolarizing_channel(0.3), [0]).matrix
    np.testing.assert_allclose(dep[0], want, atol=1e-12)


def test_shot_outcome_discard_flag():
    assert not ShotOutcome(3).discarded
    assert ShotOutcome(3, (False, True)).discarded
