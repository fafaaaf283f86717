import math

import numpy as np
import pytest

import odpca


def test_sym_eig_matches_numpy():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((6, 6))
    a = a + a.T
    values, vectors = odpca.sym_eig(a)
    np.testing.assert_allclose(values, np.sort(np.linalg.eigvalsh(a))[::-1], atol=1e-10)
    np.testing.assert_allclose(a @ vectors, vectors * values, atol=1e-9)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(6), atol=1e-12)


def test_projection_distance_examples():
    e1 = np.array([[1.0], [0.0]])
    e2 = np.array([[0.0], [1.0]])
    assert odpca.projection_distance(e1, e1) == pytest.approx(0.0, abs=1e-12)
    assert odpca.projection_distance(e1, e2) == pytest.approx(math.sqrt(2.0))
    q, _ = np.linalg.qr(np.random.default_rng(1).standard_normal((8, 3)))
    r, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((8, 3)))
    dense = np.linalg.norm(q @ q.T - r @ r.T)
    assert odpca.projection_distance(q, r) == pytest.approx(dense, abs=1e-10)


def test_full_pca_and_covariance():
    model = odpca.make_spiked_model(20, 2, seed=3)
    x = model.sample(4000, seed=7)
    np.testing.assert_allclose(odpca.empirical_covariance(x), x.T @ x / len(x), atol=1e-10)
    u = odpca.full_pca(x, 2)
    assert u.shape == (20, 2)
    assert odpca.projection_distance(u, model.ground_truth) < 0.3


def test_online_state_single_round_equals_dpca():
    model = odpca.make_spiked_model(12, 2, seed=5)
    batches = [model.sample(50, seed=11, counter=i * 50 * 12) for i in range(3)]
    state = odpca.OdpcaState(12, 2, 1)
    state.step(batches)
    assert state.round == 1
    np.testing.assert_allclose(np.trace(state.accumulator), 2.0, atol=1e-10)
    online = state.finalize()
    one_shot = odpca.dpca(batches, 2)
    assert odpca.projection_distance(online, one_shot) < 1e-8
    with pytest.raises(odpca.StateError):
        state.step(batches)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        odpca.local_top_k(np.ones((3, 2)), 5)
    with pytest.raises(odpca.DegenerateTaskError):
        odpca.relative_error(1.0, 0.0)
    assert issubclass(odpca.StateError, odpca.Error)


def test_tasks():
    x = np.array([[3.0, 4.0], [1.0, 0.0]])
    assert odpca.lowrank_error(x, np.array([[1.0], [0.0]])) == pytest.approx(4.0)
    pts = np.array([[0.0], [1.0], [10.0], [11.0]])
    res = odpca.kmeans_lloyd(pts, 2, seed=1)
    assert res["cost"] == pytest.approx(1.0)
    assert res["converged"]


def test_run_stream_report():
    report = odpca.run_stream(d=15, k=2, m=3, n=20, horizon=3, seed=2)
    assert report["ambient_dim"] == 15
    assert set(report["results"]) == {"odpca", "dpca", "full", "baseline"}
    assert len(report["rounds"]) == 3
    assert report["results"]["odpca"]["comm_entries"] == 3 * 3 * 15 * 2
    again = odpca.run_stream(d=15, k=2, m=3, n=20, horizon=3, seed=2)
    assert again["results"]["odpca"]["final_error"] == report["results"]["odpca"]["final_error"]
