import math

import numpy as np
import pytest

from ftqml.trainer import (
    FINAL_WINDOW,
    TrainConfig,
    TrainingTrace,
    load_dataset,
    parameter_shift_gradient,
    train,
)


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(task="nope")
    with pytest.raises(ValueError):
        TrainConfig.parity(rounds=6)
    with pytest.raises(ValueError):
        TrainConfig.parity(noise_model="thermal")
    with pytest.raises(ValueError):
        TrainConfig.parity(noise_sampling="sometimes")
    with pytest.raises(ValueError):
        TrainConfig.from_dict({"task": "parity422", "lr": 0.1})


def test_config_digest_tracks_fields():
    a = TrainConfig.parity(p=0.001)
    assert a.digest() == TrainConfig.parity(p=0.001).digest()
    assert a.digest() != TrainConfig.parity(p=0.002).digest()


@pytest.mark.parametrize("sampling", ["per_circuit", "per_shot"])
def test_noiseless_parity_converges(sampling, landscape_cache):
    tr = train(TrainConfig.parity(seed=3, noise_sampling=sampling), landscape_cache)
    assert len(tr) == 100
    assert tr.accuracy[-1] == 1.0


def test_trace_determinism(landscape_cache):
    cfg = TrainConfig.parity(p=0.005, rounds=1, seed=2, iterations=20)
    a, b = train(cfg, landscape_cache), train(cfg, landscape_cache)
    assert a.accuracy == b.accuracy and a.loss == b.loss and a.params == b.params


def test_final_accuracy_definition(tmp_path, landscape_cache):
    tr = train(TrainConfig.parity(p=0.0025, seed=4, iterations=60), landscape_cache)
    assert tr.final_accuracy() == pytest.approx(np.mean(tr.accuracy[-FINAL_WINDOW:]), abs=0)
    path = tmp_path / "trace.csv"
    tr.to_csv(path)
    back = TrainingTrace.from_csv(path)
    assert back.accuracy == tr.accuracy and back.avg_sq_gradient == tr.avg_sq_gradient
    assert back.final_accuracy() == tr.final_accuracy()
    assert back.config_hash == tr.config_hash and back.seed == 4


def test_parity_gradient_is_shift_rule():
    calls = []

    def loss(p, shots, seed):
        calls.append(seed)
        return math.sin(p[0])

    g = parameter_shift_gradient(loss, [0.3], shots=10, seed=(1, 2))
    assert g[0] == pytest.approx(math.cos(0.3))
    assert calls == [(1, 2, 0, 1), (1, 2, 0, 2)]


def test_qvc_training_runs_and_records():
    cfg = TrainConfig.qvc(n_qubits=2, n_layers=2, n_classes=2, iterations=3, n_samples=20, batch_size=10, shots=0)
    tr = train(cfg)
    assert len(tr) == 3 and len(tr.params) == 12
    assert all(g >= 0 for g in tr.avg_sq_gradient)


def test_qvc_with_classical_head():
    cfg = TrainConfig.qvc(n_qubits=2, n_layers=1, n_classes=3, classical_layer=True, iterations=2,
                          n_samples=30, batch_size=10, shots=200)
    tr = train(cfg)
    assert len(tr) == 2


def test_qvc_exact_gradient_matches_finite_difference():
    from ftqml.qvc import NoiseConfig, QvcArchitecture, amplitude_batch
    from ftqml.trainer import QvcObjective
    from ftqml.qvc import softmax_xent

    rng = np.random.default_rng(0)
    arch = QvcArchitecture(2, 2, n_classes=2)
    obj = QvcObjective(arch, NoiseConfig(0.01), 0)
    psi = amplitude_batch(rng.uniform(0, 1, (6, 4)))
    y = rng.integers(0, 2, 6)
    params = rng.uniform(0, 2 * np.pi, arch.n_params)
    _, grad, _, _ = obj.gradient(params, psi, y, None, (0, 0))

    def loss(p):
        return softmax_xent(obj.scores(obj.z(p, psi), None), y)[0]

    h = 1e-5
    fd = np.array([(loss(params + h * e) - loss(params - h * e)) / (2 * h) for e in np.eye(params.size)])
    np.testing.assert_allclose(grad, fd, atol=1e-6)


def test_dataset_shape_mismatch():
    with pytest.raises(ValueError):
        load_dataset(TrainConfig.qvc(n_qubits=3))
