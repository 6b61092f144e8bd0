from fractions import Fraction

import numpy as np
import pytest

from conftest import SQRT_HALF, random_density
from qcompat.lemmas import (
    AnticommutingSet,
    TripartiteDistribution,
    check_lemma2,
    clifford_bound,
    clifford_sweep,
    jm_margins,
    jm_unbiased,
    joint_povm_unbiased,
    lemma2_sweep,
    lemma2_vertices,
    random_clifford_triples,
    tripartite_correlators,
)
from qcompat.pauli_core import I2, SX, SY, SZ, HermitianOp2, eig2


def three_qubit_triple():
    k = lambda a, b, c: np.kron(np.kron(a, b), c)  # noqa: E731
    return AnticommutingSet([k(SX, SX, I2), k(SZ, I2, SX), k(I2, SY, SY)])


def test_anticommuting_set_validation():
    three_qubit_triple()
    with pytest.raises(ValueError):
        AnticommutingSet([SX, SX + 0 * SY, SZ])
    with pytest.raises(ValueError):
        AnticommutingSet([SX, 2 * SZ])


def test_clifford_bound_maximally_mixed():
    s = three_qubit_triple()
    x = np.array([0.3, -1.2, 0.5])
    lin, sq = clifford_bound(s, np.eye(8) / 8, x)
    assert lin == pytest.approx(-np.linalg.norm(x))
    assert sq == pytest.approx(0, abs=1e-15)


def test_clifford_bound_eigenstate_mixture():
    s = three_qubit_triple()
    rho = (np.eye(8) + s.ops[0]) / 8
    lin, sq = clifford_bound(s, rho, [1, 0, 0])
    assert sq == pytest.approx(1)
    assert lin == pytest.approx(0, abs=1e-12)


def test_clifford_bound_rejects_bad_state():
    s = three_qubit_triple()
    with pytest.raises(ValueError):
        clifford_bound(s, np.eye(8), [1, 0, 0])


def test_clifford_bound_random_states(rng):
    ops = random_clifford_triples(rng, 20)
    for k in range(20):
        s = AnticommutingSet(list(ops[k]))
        for _ in range(50):
            rho = random_density(rng, 8)
            lin, sq = clifford_bound(s, rho, rng.standard_normal(3))
            assert lin <= 1e-10
            assert sq <= 1 + 1e-10


def test_clifford_sweep():
    rep = clifford_sweep(3000, seed=2)
    assert rep["violations"] == 0
    assert rep["max_sum_of_squares"] <= 1


def test_correlators_examples():
    assert tripartite_correlators(TripartiteDistribution(np.full(8, 1 / 8))) == (0, 0, 0)
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = p[1, 1, 1] = 0.5
    assert tripartite_correlators(TripartiteDistribution(p)) == (1, 1, 1)
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = 1
    assert tripartite_correlators(TripartiteDistribution(p)) == (1, 1, 1)


def test_distribution_validation():
    with pytest.raises(ValueError):
        TripartiteDistribution([-0.1, 0.3, 0.2, 0.2, 0.1, 0.1, 0.1, 0.1])
    with pytest.raises(ValueError):
        TripartiteDistribution(np.full(8, 0.2))


def test_lemma2_examples():
    assert check_lemma2(TripartiteDistribution(np.full(8, 1 / 8)))
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = 0.3
    p[1, 1, 1] = 0.7
    d = TripartiteDistribution(p)
    p12, p23, p13 = tripartite_correlators(d)
    assert p12 == p13 == 1
    assert p23 == 1
    assert check_lemma2(d, tol=0)


def test_lemma2_correlation_identity(rng):
    # p12 = 2 (p000 + p001 + p110 + p111) - 1, and similarly for p13
    for _ in range(100):
        p = rng.dirichlet(np.ones(8)).reshape(2, 2, 2)
        p12, p23, p13 = tripartite_correlators(TripartiteDistribution(p))
        assert p12 == pytest.approx(2 * (p[0, 0, 0] + p[0, 0, 1] + p[1, 1, 0] + p[1, 1, 1]) - 1)
        assert p13 == pytest.approx(2 * (p[0, 0, 0] + p[0, 1, 0] + p[1, 0, 1] + p[1, 1, 1]) - 1)
        assert p23 == pytest.approx(2 * (p[0, 0, 0] + p[1, 0, 0] + p[0, 1, 1] + p[1, 1, 1]) - 1)


def test_lemma2_vertices_exact():
    margins = dict(lemma2_vertices())
    assert all(isinstance(m, Fraction) for m in margins.values())
    assert min(margins.values()) >= 0
    # tight everywhere except where b == c but a differs
    assert {v for v, m in margins.items() if m != 0} == {(0, 1, 1), (1, 0, 0)}
    assert margins[(0, 1, 1)] == 4
    for (a, b, c), m in margins.items():
        p = np.zeros((2, 2, 2))
        p[a, b, c] = 1
        p12, p23, p13 = tripartite_correlators(TripartiteDistribution(p))
        assert m == Fraction(int(p23 - p12 - p13 + 1))


def test_lemma2_sweep():
    rep = lemma2_sweep(200_000, seed=7)
    assert rep["violations"] == 0
    assert rep["min_margin"] >= 0


def test_jm_examples():
    assert not jm_unbiased([1, 0, 0], [0, 1, 0])
    assert jm_unbiased([1, 0, 0], [1, 0, 0])
    assert jm_unbiased([SQRT_HALF, 0, 0], [0, SQRT_HALF, 0])
    quad, tri = jm_margins([SQRT_HALF, 0, 0], [0, SQRT_HALF, 0])
    assert quad == pytest.approx(0, abs=1e-15) and tri == pytest.approx(0, abs=1e-15)
    with pytest.raises(ValueError):
        jm_unbiased([1.1, 0, 0], [0, 0, 0])


def test_jm_forms_agree(rng):
    n = 100_000
    x = rng.standard_normal((n, 3))
    y = rng.standard_normal((n, 3))
    x *= (rng.random(n) ** (1 / 3) / np.linalg.norm(x, axis=1))[:, None]
    y *= (rng.random(n) ** (1 / 3) / np.linalg.norm(y, axis=1))[:, None]
    quad = 1 + np.sum(x * y, axis=1) ** 2 - np.sum(x * x, axis=1) - np.sum(y * y, axis=1)
    tri = 2 - np.linalg.norm(x + y, axis=1) - np.linalg.norm(x - y, axis=1)
    assert np.array_equal(quad >= 0, tri >= 0)
    for k in range(200):
        assert jm_unbiased(x[k], y[k]) == (quad[k] >= 0)


def _check_povm(x, y):
    effects, window = joint_povm_unbiased(x, y)
    total = HermitianOp2(0, [0, 0, 0])
    for e in effects.values():
        assert eig2(e)[0] >= -1e-12
        total = total + e
    assert total.allclose(HermitianOp2(1, [0, 0, 0]))
    for a in (1, -1):
        assert (effects[(a, 1)] + effects[(a, -1)]).allclose(HermitianOp2.effect(x, a))
        assert (effects[(1, a)] + effects[(-1, a)]).allclose(HermitianOp2.effect(y, a))
    return window


def test_joint_povm_examples():
    lo, hi = _check_povm([SQRT_HALF, 0, 0], [0, SQRT_HALF, 0])
    assert lo == pytest.approx(0, abs=1e-15) and hi == pytest.approx(0, abs=1e-15)
    eta = 0.8
    lo, hi = _check_povm([eta, 0, 0], [eta, 0, 0])
    assert (lo, hi) == pytest.approx((2 * eta - 1, 1))
    lo, hi = _check_povm([0.6, 0, 0], [0, 0.6, 0])
    assert lo == pytest.approx(np.sqrt(0.72) - 1) and hi == pytest.approx(1 - np.sqrt(0.72))
    assert hi == pytest.approx(0.1515, abs=1e-4)
    with pytest.raises(ValueError):
        joint_povm_unbiased([1, 0, 0], [0, 1, 0])


def test_joint_povm_random(rng):
    done = 0
    while done < 100:
        x, y = rng.uniform(-0.7, 0.7, (2, 3))
        if np.linalg.norm(x) > 1 or np.linalg.norm(y) > 1 or not jm_unbiased(x, y):
            continue
        _check_povm(x, y)
        done += 1
