import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftqml import datasets
from ftqml.qvc import (
    NoiseConfig,
    QvcArchitecture,
    amplitude_batch,
    amplitude_encode,
    basis_encode,
    build_parity_circuit,
    build_qvc_circuit,
    evolve,
    expectations,
    forward,
    parity_expectation,
    parity_logical_probs,
    parity_predict,
    parity_target,
    softmax_xent,
)
from ftqml.simcore import DensityMatrix, PureState, apply_channel, measure_z_expectation, run_circuit
from ftqml.noisechan import depolarizing_channel
from ftqml.trainer import parameter_shift_gradient


def test_amplitude_encoding_normalises():
    s = amplitude_encode(np.arange(1, 17))
    assert s.n_qubits == 4
    assert np.isclose(np.linalg.norm(s.amplitudes), 1.0)
    with pytest.raises(ValueError):
        amplitude_encode(np.ones(6))
    with pytest.raises(ValueError):
        amplitude_encode(np.zeros(4))


def test_basis_encode_rejects_non_bits():
    with pytest.raises(ValueError):
        basis_encode([0, 2])


def test_circuit_layout():
    arch = QvcArchitecture(3, 2)
    ir = build_qvc_circuit(arch, np.zeros(arch.n_params))
    counts = ir.count()
    assert counts["rz"] == 12 and counts["ry"] == 6 and counts["cz"] == 4
    assert sum(op.noise == "depol" for op in ir.ops) == 6


def _reference(arch, params, psi, p):
    """Op-by-op density-matrix reference run through the generic simulator."""
    ir = build_qvc_circuit(arch, params)
    ch = depolarizing_channel(p)

    def hook(i, op, state):
        if op.noise == "depol" and p > 0:
            return apply_channel(state, ch, op.targets)

    return run_circuit(ir, DensityMatrix.from_pure(PureState(arch.n_qubits, psi)), after_op=hook)


def test_batched_forward_matches_reference():
    rng = np.random.default_rng(0)
    arch = QvcArchitecture(3, 2)
    params = rng.uniform(0, 2 * np.pi, arch.n_params)
    psi = amplitude_batch(rng.uniform(0, 1, (2, 8)))
    rho = evolve(arch, params, psi, NoiseConfig(0.05))
    z = expectations(rho, 3)
    for i in range(2):
        ref = _reference(arch, params, psi[i], 0.05)
        for q in range(3):
            assert z[i, q] == pytest.approx(measure_z_expectation(ref, q), abs=1e-12)


def test_depolarizing_shrinks_expectations():
    rng = np.random.default_rng(1)
    arch = QvcArchitecture(2, 3)
    params = rng.uniform(0, 2 * np.pi, arch.n_params)
    x = rng.uniform(0, 1, (5, 4))
    z0 = np.abs(forward(arch, params, x)["z"]).mean()
    z1 = np.abs(forward(arch, params, x, NoiseConfig(0.2))["z"]).mean()
    assert z1 < z0


def test_shot_expectations_seeded():
    arch = QvcArchitecture(2, 1)
    x = np.ones((3, 4))
    params = np.full(arch.n_params, 0.3)
    a = forward(arch, params, x, shots=500, seed=4)["z"]
    b = forward(arch, params, x, shots=500, seed=4)["z"]
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        forward(arch, params, x, shots=10)


def test_exact_gradient_matches_finite_difference():
    rng = np.random.default_rng(2)
    arch = QvcArchitecture(2, 2)
    params = rng.uniform(0, 2 * np.pi, arch.n_params)
    x = rng.uniform(0, 1, (4, 4))

    def z_loss(p, shots=0, seed=None):
        return float(np.sum(forward(arch, p, x)["z"] * w))

    w = rng.normal(size=(4, 2))
    g = parameter_shift_gradient(z_loss, params)
    h = 1e-5
    fd = np.array([(z_loss(params + h * e) - z_loss(params - h * e)) / (2 * h) for e in np.eye(params.size)])
    np.testing.assert_allclose(g, fd, atol=1e-6)


def test_constant_loss_has_zero_gradient():
    g = parameter_shift_gradient(lambda p, s, seed: 3.0, np.ones(4))
    np.testing.assert_array_equal(g, 0.0)


def test_softmax_gradient():
    rng = np.random.default_rng(3)
    s = rng.normal(size=(3, 4))
    y = np.array([0, 2, 3])
    _, g = softmax_xent(s, y)
    h = 1e-6
    e = np.zeros_like(s)
    e[1, 2] = h
    fd = (softmax_xent(s + e, y)[0] - softmax_xent(s - e, y)[0]) / (2 * h)
    assert g[1, 2] == pytest.approx(fd, abs=1e-6)


@given(st.floats(-np.pi, np.pi), st.sampled_from([(0, 0), (0, 1), (1, 0), (1, 1)]))
@settings(max_examples=40)
def test_parity_fast_path_matches_circuit(theta, bits):
    ir = build_parity_circuit()
    out = run_circuit(ir, basis_encode(bits), {"theta": theta})
    assert parity_expectation(theta, bits) == pytest.approx(measure_z_expectation(out, 0), abs=1e-12)


def test_parity_sign_flips_negate_angles():
    theta = 0.7
    s = -np.ones((1, 6))
    np.testing.assert_allclose(parity_logical_probs(theta, (1, 0), s), parity_logical_probs(-theta, (1, 0)), atol=1e-12)


def test_parity_labels():
    assert [parity_target(b) for b in [(0, 0), (0, 1), (1, 0), (1, 1)]] == [1, -1, -1, 1]
    assert parity_predict(-0.1) == 1 and parity_predict(0.1) == 0


def test_dataset_csv_round_trip(tmp_path):
    ds = datasets.synthetic_blobs(40, 4, 4, seed=1)
    path = tmp_path / "blobs.csv"
    datasets.save_csv(ds, path)
    back = datasets.load_csv(path)
    np.testing.assert_array_equal(back.labels, ds.labels)
    np.testing.assert_allclose(back.features, ds.features)
    (tmp_path / "bad.csv").write_text("label,f0\n1,0.5\n")
    with pytest.raises(ValueError):
        datasets.load_csv(tmp_path / "bad.csv")


def test_parity_dataset_shape():
    ds = datasets.parity_dataset()
    assert ds.n_samples == 24
    assert all(int(l) == int(a) ^ int(b) for (a, b), l in zip(ds.features, ds.labels))
