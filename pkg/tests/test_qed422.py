
import numpy as np
import pytest

from ftqml import validation
from ftqml.qed422 import (
    QedNoise,
    build_encoded_parity,
    code,
    logical_measure_z1,
    noise_sites,
    readout_from_physical,
    run_shot,
    simulate,
)
from ftqml.qed422.frames import LandscapeCache, compute_landscape
from ftqml.qed422.shots import NoSurvivingShots
from ftqml.qvc import parity_expectation

INPUTS = [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_codewords_are_stabilised():
    for b in INPUTS:
        v = code.codeword(*b)
        for s in code.STABILIZERS.values():
            np.testing.assert_allclose(code.pauli_matrix(s) @ v, v, atol=1e-12)


def test_logical_operators_act_on_codewords():
    x1 = code.pauli_matrix(code.LOGICAL_X[1])
    z1 = code.pauli_matrix(code.LOGICAL_Z[1])
    np.testing.assert_allclose(x1 @ code.codeword(0, 0), code.codeword(1, 0), atol=1e-12)
    np.testing.assert_allclose(z1 @ code.codeword(1, 1), -code.codeword(1, 1), atol=1e-12)
    assert not code.pauli_commutes(code.LOGICAL_X[1], code.LOGICAL_Z[1])
    assert code.pauli_commutes(code.LOGICAL_X[1], code.LOGICAL_Z[2])


def test_string_table_covers_even_weights():
    for s in range(16):
        assert (code.STRING_TO_LOGICAL[s] >= 0) == code.is_even(s)


def test_detection_suite():
    assert all(c.passed for c in validation.detection())


def test_syndromes_of_single_errors():
    assert code.syndrome("XIII") == (False, True)
    assert code.syndrome("IZII") == (True, False)
    assert code.syndrome("IIYI") == (True, True)
    assert code.syndrome("XXII") == (False, False)


def test_undetectable_errors_are_logical():
    for e in code.undetectable_logical_errors(2):
        assert code.syndrome(e) == (False, False)
        act = code.logical_action(e)
        assert not np.allclose(act, act[0, 0] * np.eye(4))


def test_ancilla_ledger_replays():
    reg = build_encoded_parity((1, 0), rounds=3)
    assert reg.replay_ok()
    assert reg.round_count == 3
    assert reg.n_qubits == 10 + 6


def test_register_rejects_too_many_rounds():
    with pytest.raises(ValueError):
        build_encoded_parity((0, 0), rounds=-1)


@pytest.mark.parametrize("rounds", [0, 2])
def test_noiseless_encoded_matches_bare(rounds):
    for theta in np.linspace(-np.pi, np.pi, 7):
        for b in INPUTS:
            reg = build_encoded_parity(b, rounds)
            tr = simulate(reg, theta, rng=np.random.default_rng(0))
            assert all(f == (False, False) for f in tr.flags)
            assert logical_measure_z1(tr.state).z1 == pytest.approx(parity_expectation(theta, b), abs=1e-10)


def test_readout_discards_odd_strings():
    p = np.zeros(16)
    p[0b0001] = 0.5  # odd
    p[0b0000] = 0.5
    r = readout_from_physical(p)
    assert r.discard_rate == pytest.approx(0.5)
    assert r.z1 == pytest.approx(1.0)
    q = np.zeros(16)
    q[0b0111] = 1.0
    with pytest.raises(NoSurvivingShots):
        readout_from_physical(q)
    with pytest.raises(NoSurvivingShots):
        readout_from_physical(q, shots=50, seed=1)


def test_sampled_readout_is_seeded():
    land = compute_landscape((0, 1), QedNoise("gate", 0.005), max_rounds=2)
    a = land.readout(0.4, 2, 1000, (1, 2))
    b = land.readout(0.4, 2, 1000, (1, 2))
    assert (a.z1, a.survivors) == (b.z1, b.survivors)
    c = land.readout(0.4, 2, 1000, (1, 3))
    assert (a.z1, a.survivors) != (c.z1, c.survivors)


def test_gate_sites_skip_syndrome_block():
    reg = build_encoded_parity((0, 0), 2)
    sites = noise_sites(reg.ir, QedNoise("gate", 0.01))
    synd = set(reg.ir.register("syndrome").qubits)
    assert sites and all(s.qubit not in synd for s in sites)
    env = noise_sites(reg.ir, QedNoise("env", 0.01))
    assert len({s.op_index for s in env}) < len({s.op_index for s in sites})


def test_f_anc_zero_removes_ancilla_rates():
    noise = QedNoise("gate", 0.01, f_anc=0.0)
    reg = build_encoded_parity((0, 0), 1)
    for s in noise_sites(reg.ir, noise):
        assert (noise.site_rate(s) == 0) == s.ancilla


def test_landscape_noiseless_is_identity_frame():
    land = compute_landscape((1, 1), QedNoise("gate", 0.0))
    assert land.survival(5) == pytest.approx(1.0)
    assert land.W[0, 0, 0] == pytest.approx(1.0)


def test_survival_decreases_with_rounds():
    land = compute_landscape((0, 1), QedNoise("gate", 0.01))
    s = [land.survival(r) for r in range(6)]
    assert all(a >= b - 1e-15 for a, b in zip(s, s[1:]))
    assert s[0] == pytest.approx(1.0)


def test_frames_vs_statevector():
    assert validation.frames_vs_statevector(patterns=10).passed


def test_landscape_agrees_with_monte_carlo_shots():
    noise = QedNoise("gate", 0.03)
    theta, bits, rounds, shots = 0.9, (0, 1), 1, 1500
    land = compute_landscape(bits, noise, max_rounds=rounds)
    p = land.physical(theta, rounds)
    exact = readout_from_physical(p)
    outs = [run_shot(theta, bits, noise, rounds, (11, k)) for k in range(shots)]
    kept = [o for o in outs if not o.discarded and code.is_even(o.bitstring)]
    rate = 1 - len(kept) / shots
    assert abs(rate - exact.discard_rate) < 4 * np.sqrt(exact.discard_rate * (1 - exact.discard_rate) / shots)
    z = np.mean([1.0 if code.STRING_TO_LOGICAL[o.bitstring] < 2 else -1.0 for o in kept])
    assert abs(z - exact.z1) < 4 / np.sqrt(len(kept))


def test_cache_persists(tmp_path):
    noise = QedNoise("env", 0.004)
    c1 = LandscapeCache(tmp_path)
    a = c1.get((1, 0), noise, max_rounds=1)
    files = list(tmp_path.glob("landscape-*.npz"))
    assert len(files) == 1
    b = LandscapeCache(tmp_path).get((1, 0), noise, max_rounds=1)
    np.testing.assert_array_equal(a.W, b.W)
