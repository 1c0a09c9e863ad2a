import json

import numpy as np
import pytest

import bpiree


def soft(v, tau):
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


def small_problem(seed=0, n=20, q=40, blocks=4, lam=1e-3):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, q))
    A /= np.linalg.norm(A, axis=0)
    x_true = np.zeros(q)
    x_true[rng.choice(q, 3, replace=False)] = rng.standard_normal(3)
    b = A @ x_true
    return bpiree.Problem.least_squares(A, b, bpiree.Penalty.log(lam, 0.1), blocks), A, b


def test_prox_matches_soft_threshold():
    rng = np.random.default_rng(1)
    for v, tau in zip(rng.normal(size=200) * 3, rng.exponential(size=200)):
        assert bpiree.prox_weighted_abs(v, tau) == pytest.approx(soft(v, tau), abs=1e-15)
    assert bpiree.prox_weighted_abs(5.0, float("inf")) == 0.0
    with pytest.raises(ValueError):
        bpiree.prox_weighted_abs(1.0, -1.0)


def test_block_prox_step():
    x_hat = np.array([1.0, -2.0, 0.05])
    grad = np.array([0.5, -0.5, 0.0])
    w = np.array([1.0, 1.0, 1.0])
    out = bpiree.block_prox_step(x_hat, grad, 0.5, w)
    np.testing.assert_allclose(out, soft(x_hat - 0.5 * grad, 0.5))


def test_extrapolation_bound():
    assert bpiree.extrapolation_bound(1.0, 1.0, 2.0, 0.9) == pytest.approx(0.9 / 6)


def test_objective_and_gradient():
    p, A, b = small_problem()
    x = np.linspace(-1, 1, p.dim)
    F = 0.5 * np.sum((A @ x - b) ** 2) + 1e-3 * np.sum(np.log1p(np.abs(x) / 0.1))
    assert p.objective(x) == pytest.approx(F, rel=1e-12)
    g = A.T @ (A @ x - b)
    np.testing.assert_allclose(p.gradient(x), g, rtol=1e-12, atol=1e-14)
    blk = p.blocks[1]
    np.testing.assert_allclose(p.block_gradient(x, 1), g[blk], rtol=1e-12, atol=1e-14)
    L = np.linalg.norm(A[:, blk], 2) ** 2
    assert L <= p.block_lipschitz(1) <= 1.02 * L


@pytest.mark.parametrize("algo", ["bpiree", "pire", "pire-au", "irl1"])
def test_monotone_solvers(algo):
    p, _, _ = small_problem()
    cfg = bpiree.SolverConfig()
    cfg.tol = 1e-6
    cfg.record_trace = True
    r = bpiree.solve(p, algo, cfg)
    assert r.status == "Converged"
    F = [p.objective(np.zeros(p.dim))] + [t.F for t in r.trace]
    assert all(b <= a + 1e-12 * (1 + abs(a)) for a, b in zip(F, F[1:]))


def test_irl1e1_reaches_irl1_objective():
    p, _, _ = small_problem()
    cfg = bpiree.SolverConfig()
    cfg.tol = 1e-8
    a = bpiree.solve(p, "irl1", cfg)
    b = bpiree.solve(p, "irl1e1", cfg)
    assert b.status == "Converged"
    assert b.F == pytest.approx(a.F, rel=1e-3)


def test_pire_ps_on_single_block_equals_pire():
    p, _, _ = small_problem(blocks=1)
    cfg = bpiree.SolverConfig()
    assert np.array_equal(bpiree.solve(p, "pire-ps", cfg).x, bpiree.solve(p, "pire", cfg).x)


def test_solve_is_deterministic():
    p, _, _ = small_problem(seed=3)
    cfg = bpiree.SolverConfig()
    cfg.shuffled = True
    cfg.schedule_seed = 11
    a = bpiree.solve(p, "bpiree", cfg)
    b = bpiree.solve(p, "bpiree", cfg)
    assert np.array_equal(a.x, b.x)
    assert a.iterations == b.iterations


def test_bad_config_raises():
    p, _, _ = small_problem()
    cfg = bpiree.SolverConfig()
    cfg.gamma = 0.5
    with pytest.raises(ValueError, match="gamma"):
        bpiree.solve(p, "bpiree", cfg)
    with pytest.raises(ValueError):
        bpiree.solve(p, "nope")
    with pytest.raises(ValueError):
        cfg.momentum = "heavy"


def test_lp_solver_on_generated_instance():
    inst = bpiree.generate(json.dumps({"experiment": {"example": "matrix_lp", "seed": 2}}))
    p = inst.problem
    assert p.num_blocks == 5
    cfg = bpiree.SolverConfig()
    cfg.tol = 1e-5
    r = bpiree.solve(p, "bpiree-lp", cfg)
    assert r.status == "Converged"
    assert r.eps.shape == (p.dim,)
    assert np.all(r.eps > 0)
    err = np.linalg.norm(r.x - inst.x_true) / np.linalg.norm(r.x)
    assert err < 5e-2
    assert r.support_fixed is not None


def test_instance_round_trip():
    inst = bpiree.generate()
    back = bpiree.Instance.from_json(inst.to_json())
    np.testing.assert_array_equal(back.x_true, inst.x_true)
    x = np.ones(inst.problem.dim)
    assert back.problem.objective(x) == inst.problem.objective(x)


def test_compare_report():
    report = json.loads(bpiree.compare('{"experiment": {"seed": 4}}'))
    text = json.dumps(report)
    for algo in ("bpiree", "irl1", "irl1e1"):
        assert algo in text
    assert bpiree.compare('{"experiment": {"seed": 4}}') == bpiree.compare('{"experiment": {"seed": 4}}')


def test_config_errors():
    with pytest.raises(bpiree.ConfigError, match="experiment.n"):
        bpiree.generate('{"experiment": {"n": 0}}')
    with pytest.raises(bpiree.ConfigError):
        bpiree.normalize_config('{"bogus": 1}')
    doc = bpiree.normalize_config("{}")
    assert bpiree.normalize_config(doc) == doc
