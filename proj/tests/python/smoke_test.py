"""Smoke tests for the python module: exercises the main operations end to
end on a small synthetic instance. Plain asserts, no test framework."""

import math
import tempfile

import numpy as np

import rgsl


def make_graph(seed=7):
    means = np.zeros((2, 6))
    means[0, 0] = 2.5
    means[1, 1] = 2.5
    return rgsl.sbm_generate([12, 12], 0.4, 0.05, means, 0.8, seed, 0.25)


def test_graph_ops():
    g = make_graph()
    g.validate()
    assert g.n == 24 and g.d == 6 and g.num_classes == 2
    n = rgsl.normalize_adjacency(g.adjacency)
    assert np.allclose(n, n.T)
    assert n.min() >= 0.0

    pruned = rgsl.prune_knn(g.adjacency, 3)
    assert np.allclose(pruned, pruned.T)
    r = rgsl.homophily_ratios(g, g.adjacency)
    assert 0.0 <= r.min() and r.max() <= 1.0


def test_structure_ops():
    g = make_graph()
    sp = rgsl.StructureParams.identity_init(g.d, g.d, 2.0, 0.5)
    lg = rgsl.similarity_matrix(sp, g.features)
    assert lg.similarity.shape == (g.n, g.n)
    assert lg.similarity.max() <= 1.0 and lg.similarity.min() >= 0.0
    assert np.allclose(np.diag(lg.similarity), 0.0)

    blended = rgsl.blend_adjacency(g.adjacency, lg.similarity, 0.5)
    assert blended.shape == (g.n, g.n)

    v = np.array([2.0, -0.5, 0.3])
    assert np.allclose(rgsl.prox_l1(v, 0.5), [1.5, 0.0, 0.0])

    grad_m, grad_a = rgsl.kernel_gradients(sp, g.features, np.zeros((g.n, g.n)))
    assert not grad_m.any() and not grad_a.any()


def test_spectral():
    y = np.diag([3.0, 2.0])
    pair = rgsl.spectral_norm(y, 1e-12, 1000, 4)
    assert abs(pair.sigma - 3.0) < 1e-9
    assert pair.converged

    res = rgsl.alignment_loss_and_grad(np.eye(3), np.zeros((3, 3)))
    assert res.loss == 0.0


def test_training_and_attack():
    g = make_graph()
    poisoned = rgsl.feature_difference_attack(g, 0.2, 99)
    added = int(np.triu(poisoned - g.adjacency).sum())
    assert added == int(0.2 * g.edge_count())

    gp = rgsl.Graph()
    gp.n, gp.d, gp.num_classes = g.n, g.d, g.num_classes
    gp.features, gp.adjacency, gp.labels = g.features, poisoned, g.labels
    gp.train_mask, gp.test_mask = g.train_mask, g.test_mask

    cfg = rgsl.TrainConfig()
    cfg.alpha = 0.8
    cfg.tau = 2.0
    cfg.gamma1 = 0.05
    cfg.gamma2 = 0.01
    cfg.lambda1 = 0.01
    cfg.outer_steps = 5
    cfg.seed = 1
    cfg.prune.kind = rgsl.PruneKind.knn
    cfg.prune.k = 4
    report = rgsl.run_rgsla(gp, cfg)
    assert 0.0 <= report.test_accuracy <= 1.0
    assert len(report.iterations) == 6
    for it in report.iterations:
        assert math.isfinite(it.total)
        assert abs(it.total - (it.l_gnn + cfg.gamma1 * it.l_ss + cfg.gamma2 * it.l_align)) < 1e-9

    plain = rgsl.train_plain_gcn(gp, 0.2, 25, 8, 1)
    assert 0.0 <= plain.test_accuracy <= 1.0

    cfg2 = rgsl.TrainConfig()
    cfg2.set_theta(0.4, 0.1, 0.2)
    assert abs(cfg2.lambda1 - 0.25) < 1e-12


def test_bounds():
    a = np.zeros((4, 4))
    for i, j in ((0, 1), (1, 2), (2, 3), (3, 0)):
        a[i, j] = a[j, i] = 1.0
    x = np.zeros((4, 3))
    x[:, 0] = 2.0
    params = rgsl.BoundParams()
    params.norm_w1 = 0.5
    params.norm_w2 = 2.5
    params.lipschitz = 1.5
    params.common_degree = 2
    params.labeled_count = 3
    bound = rgsl.rademacher_lower_bound(
        rgsl.normalize_adjacency(a), x, params, rgsl.neighbor_lists(a))
    assert abs(bound - 5.0 / math.sqrt(3.0)) < 1e-9

    params.labeled_count = 2
    params.total_count = 4
    trc = rgsl.trc_upper_bound(np.eye(4), x, params)
    assert trc > 0.0
    gap = rgsl.generalization_gap_bound(trc, params, 0.1)
    assert gap > trc


def test_io_roundtrip():
    g = make_graph()
    with tempfile.TemporaryDirectory() as tmp:
        rgsl.save_graph_dir(g, tmp)
        loaded = rgsl.load_graph_dir(tmp)
        assert np.array_equal(loaded.features, g.features)
        assert np.array_equal(loaded.adjacency, g.adjacency)
        assert np.array_equal(loaded.labels, g.labels)


def test_validation_errors():
    g = make_graph()
    try:
        rgsl.blend_adjacency(g.adjacency, g.adjacency, 1.5)
        raise AssertionError("expected ValueError")
    except ValueError:
        pass
    try:
        rgsl.load_graph_dir("/nonexistent/rgsl")
        raise AssertionError("expected IOError")
    except IOError:
        pass


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok: {test.__name__}")
    print(f"{len(tests)} smoke tests passed")
