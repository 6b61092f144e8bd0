"""Clifford expectation bound, the tripartite correlation inequality and the
joint-measurability criterion for pairs of unbiased qubit observables."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import _kernels
from .pauli_core import I2, POSITIVITY_TOL, HermitianOp2, bloch_op, check_hermitian, min_eig

ANTICOMMUTE_TOL = 1e-10
SIMPLEX_TOL = 1e-12


class AnticommutingSet:
    """Self-adjoint ``E_n`` with ``E_n E_m + E_m E_n = 2 delta_nm I``."""

    def __init__(self, ops, tol: float = ANTICOMMUTE_TOL):
        ops = [check_hermitian(o) for o in ops]
        if not ops:
            raise ValueError("empty operator set")
        dim = ops[0].shape[0]
        if any(o.shape != (dim, dim) for o in ops):
            raise ValueError("operators must share one dimension")
        eye = np.eye(dim)
        for i, a in enumerate(ops):
            for k, b in enumerate(ops[i:], start=i):
                target = 2 * eye if i == k else 0 * eye
                if np.linalg.norm(a @ b + b @ a - target, 2) > tol:
                    raise ValueError(f"operators {i} and {k} violate the anticommutation relation")
        self.ops = ops
        self.dim = dim

    def __len__(self) -> int:
        return len(self.ops)

    def combination(self, x) -> np.ndarray:
        """``E(x) = sum_n x_n E_n``."""
        return sum(xn * e for xn, e in zip(np.asarray(x, dtype=float), self.ops))


def check_state(rho, dim: int | None = None, tol: float = POSITIVITY_TOL) -> np.ndarray:
    rho = check_hermitian(rho)
    if dim is not None and rho.shape != (dim, dim):
        raise ValueError(f"state must be {dim}x{dim}")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError("state must have unit trace")
    if min_eig(rho) < -tol:
        raise ValueError("state must be positive semidefinite")
    return rho


def clifford_bound(aset: AnticommutingSet, rho, x) -> tuple[float, float]:
    """Returns ``(|tr[rho E(x)]| - |x|, sum_n tr[rho E_n]**2)``.

    The first value is never positive and the second never exceeds one.
    """
    rho = check_state(rho, aset.dim)
    x = np.asarray(x, dtype=float)
    if x.shape != (len(aset),):
        raise ValueError("x must have one entry per operator")
    ex = abs(np.trace(rho @ aset.combination(x)).real)
    sq = sum(np.trace(rho @ e).real ** 2 for e in aset.ops)
    return float(ex - np.linalg.norm(x)), float(sq)


def random_states(rng: np.random.Generator, n: int, dim: int = 8) -> np.ndarray:
    """Ginibre-distributed mixed states, shape ``(n, dim, dim)``."""
    g = rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))
    rho = g @ np.conj(np.swapaxes(g, 1, 2))
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]


def _random_orthonormal_pairs(rng, n):
    a = rng.standard_normal((n, 3))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b = rng.standard_normal((n, 3))
    b -= np.sum(a * b, axis=1, keepdims=True) * a
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    return a, b


def _bloch_ops(v):
    return np.einsum("ni,iab->nab", v, np.stack([bloch_op(e) for e in np.eye(3)]))


def _kron3_batch(a, b, c):
    out = np.einsum("nij,nkl,nmo->nikmjlo", a, b, c)
    return out.reshape(a.shape[0], 8, 8)


def random_clifford_triples(rng: np.random.Generator, n: int) -> np.ndarray:
    """Triples ``{e1.s (x) p.s (x) I, e3.s (x) I (x) r.s, I (x) q.s (x) s.s}``
    with random orthonormal pairs ``(e1, e3)``, ``(p, q)``, ``(r, s)``.
    Shape ``(n, 3, 8, 8)``."""
    e1, e3 = _random_orthonormal_pairs(rng, n)
    p, q = _random_orthonormal_pairs(rng, n)
    r, s = _random_orthonormal_pairs(rng, n)
    eye = np.broadcast_to(I2, (n, 2, 2))
    return np.stack(
        [
            _kron3_batch(_bloch_ops(e1), _bloch_ops(p), eye),
            _kron3_batch(_bloch_ops(e3), eye, _bloch_ops(r)),
            _kron3_batch(eye, _bloch_ops(q), _bloch_ops(s)),
        ],
        axis=1,
    )


def clifford_sweep(n: int = 10_000, seed: int = 0, chunk: int = 2000) -> dict:
    """Check both Clifford bounds on ``n`` random (state, triple, x) draws."""
    rng = np.random.default_rng(seed)
    worst_sq = -np.inf
    worst_lin = -np.inf
    violations = 0
    for start in range(0, n, chunk):
        k = min(chunk, n - start)
        rho = random_states(rng, k)
        ops = random_clifford_triples(rng, k)
        x = rng.standard_normal((k, 3))
        t = np.einsum("nab,ncba->nc", rho, ops).real
        sq = np.sum(t * t, axis=1)
        lin = np.abs(np.sum(x * t, axis=1)) - np.linalg.norm(x, axis=1)
        violations += int(np.sum(sq > 1 + ANTICOMMUTE_TOL) + np.sum(lin > ANTICOMMUTE_TOL))
        worst_sq = max(worst_sq, float(sq.max()))
        worst_lin = max(worst_lin, float(lin.max()))
    return {
        "samples": n,
        "violations": violations,
        "max_sum_of_squares": worst_sq,
        "max_linear_excess": worst_lin,
    }


@dataclass(frozen=True)
class TripartiteDistribution:
    """``p[a, b, c]`` over ``{0, 1}**3``."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(2, 2, 2)
        if np.any(p < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"probabilities must sum to one, got {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)


def tripartite_correlators(d: TripartiteDistribution) -> tuple[float, float, float]:
    """``(p12, p23, p13)`` with ``p_xy = sum p(a,b,c) (-1)**(x xor y)``."""
    a, b, c = np.indices((2, 2, 2))
    p = d.p
    return (
        float(np.sum(p * (-1.0) ** (a ^ b))),
        float(np.sum(p * (-1.0) ** (b ^ c))),
        float(np.sum(p * (-1.0) ** (a ^ c))),
    )


def check_lemma2(d: TripartiteDistribution, tol: float = SIMPLEX_TOL) -> bool:
    p12, p23, p13 = tripartite_correlators(d)
    return p23 >= p12 + p13 - 1.0 - tol


def lemma2_vertices() -> list[tuple[tuple[int, int, int], Fraction]]:
    """Exact margin ``p23 - p12 - p13 + 1`` at each point mass."""
    out = []
    for a, b, c in product((0, 1), repeat=3):
        sign = lambda x, y: Fraction(1 if x == y else -1)  # noqa: E731
        margin = sign(b, c) - sign(a, b) - sign(a, c) + 1
        out.append(((a, b, c), margin))
    return out


def lemma2_sweep(n: int = 1_000_000, seed: int = 0, chunk: int = 250_000) -> dict:
    """Check the inequality on ``n`` uniform draws from the probability simplex."""
    rng = np.random.default_rng(seed)
    worst = np.inf
    violations = 0
    for start in range(0, n, chunk):
        k = min(chunk, n - start)
        w = rng.standard_exponential((k, 8))
        p = w / w.sum(axis=1, keepdims=True)
        m = _kernels.lemma2_margins(p)
        violations += int(np.sum(m < -SIMPLEX_TOL))
        worst = min(worst, float(m.min()))
    vertex_margins = [m for _, m in lemma2_vertices()]
    return {
        "samples": n,
        "violations": violations + sum(m < 0 for m in vertex_margins),
        "min_margin": worst,
        "vertex_min_margin": float(min(vertex_margins)),
    }


# --- unbiased qubit observables ----------------------------------------------


def _bloch(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(3)
    if np.linalg.norm(x) > 1.0 + SIMPLEX_TOL:
        raise ValueError("Bloch vector must have norm at most one")
    return x


def jm_margins(x, y) -> tuple[float, float]:
    """Slack of both forms of the criterion (non-negative iff jointly measurable):
    ``1 + (x.y)**2 - |x|**2 - |y|**2`` and ``2 - |x + y| - |x - y|``."""
    x, y = _bloch(x), _bloch(y)
    quad = 1.0 + (x @ y) ** 2 - x @ x - y @ y
    tri = 2.0 - np.linalg.norm(x + y) - np.linalg.norm(x - y)
    return float(quad), float(tri)


def jm_unbiased(x, y, tol: float = SIMPLEX_TOL) -> bool:
    quad, tri = jm_margins(x, y)
    ok_quad, ok_tri = quad >= -tol, tri >= -tol
    # inside the tol band either answer is acceptable
    if ok_quad != ok_tri and min(abs(quad), abs(tri)) > tol:
        raise ArithmeticError(f"criterion forms disagree: {quad!r} vs {tri!r}")
    return ok_quad


def gamma_window(x, y) -> tuple[float, float]:
    x, y = _bloch(x), _bloch(y)
    return float(np.linalg.norm(x + y) - 1.0), float(1.0 - np.linalg.norm(x - y))


def joint_povm_unbiased(x, y, tol: float = SIMPLEX_TOL):
    """Four-outcome joint observable of ``(I +- x.s)/2`` and ``(I +- y.s)/2``.

    Effects ``G(a, b) = [(1 + a b g) I + (a x + b y).s] / 4`` for ``a, b = +-1``
    with ``g`` the midpoint of the feasible window. Returns
    ``(effects, window)`` where ``effects`` maps ``(a, b)`` to ``HermitianOp2``.
    """
    lo, hi = gamma_window(x, y)
    if lo > hi + tol:
        raise ValueError("observables are not jointly measurable")
    g = 0.5 * (lo + hi)
    x, y = _bloch(x), _bloch(y)
    effects = {
        (a, b): HermitianOp2((1.0 + a * b * g) / 4, (a * x + b * y) / 4)
        for a in (1, -1)
        for b in (1, -1)
    }
    return effects, (lo, hi)
