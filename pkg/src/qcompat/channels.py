"""Qubit channels and positive unital maps as Pauli transfer matrices.

All maps act in the Heisenberg picture. For a map ``L`` with PT matrix ``M``,
``L(sigma_nu) = sum_mu M[mu, nu] sigma_mu``; the column index is the input
Pauli. The Schroedinger dual has PT matrix ``M.T`` because the Pauli operators
are self-dual under the Hilbert-Schmidt pairing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli_core import (
    PAULI,
    POSITIVITY_TOL,
    HermitianOp2,
    min_eig,
)
from .sphere import compass_descent, fibonacci_sphere, from_angles, random_unit, to_angles


@dataclass(frozen=True)
class QubitChannelPT:
    M: np.ndarray

    def __post_init__(self):
        m = np.array(self.M, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"PT matrix must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "M", m)

    @property
    def is_unital(self) -> bool:
        return bool(np.allclose(self.M[:, 0], [1, 0, 0, 0], rtol=0, atol=1e-12))

    def __call__(self, op):
        """Apply to a ``HermitianOp2`` or a 2x2 matrix."""
        if isinstance(op, HermitianOp2):
            return HermitianOp2.from_coeffs(self.M @ op.coeffs)
        return _apply_pt(self.M, op)

    def dual(self, rho) -> np.ndarray:
        """Schroedinger-picture action on a 2x2 matrix."""
        return _apply_pt(self.M.T, rho)

    def allclose(self, other: "QubitChannelPT", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.M, other.M, rtol=0, atol=atol))


def _apply_pt(m, x):
    x = np.asarray(x, dtype=complex)
    c = np.einsum("kab,ba->k", PAULI, x) / 2
    return np.einsum("k,kab->ab", m @ c, PAULI)


def identity_channel() -> QubitChannelPT:
    return QubitChannelPT(np.eye(4))


def noisy_identity(eta: float) -> QubitChannelPT:
    """``A -> eta * A + (1 - eta) * tr[A] / 2 * I``."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    return QubitChannelPT(np.diag([1.0, eta, eta, eta]))


def transpose_map() -> QubitChannelPT:
    """Transpose in the Z basis; negates sigma_y."""
    return QubitChannelPT(np.diag([1.0, 1.0, -1.0, 1.0]))


def compose(outer: QubitChannelPT, inner: QubitChannelPT) -> QubitChannelPT:
    """Heisenberg composition ``outer o inner``."""
    return QubitChannelPT(outer.M @ inner.M)


def choi(ch: QubitChannelPT) -> np.ndarray:
    """Choi matrix ``(id (x) ch*)(|phi+><phi+|)``, trace one for unital ``ch``."""
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            eij = np.zeros((2, 2), dtype=complex)
            eij[i, j] = 1.0
            out += np.kron(eij, ch.dual(eij))
    return out / 2


def is_cp(ch: QubitChannelPT, tol: float = POSITIVITY_TOL) -> bool:
    return min_eig(choi(ch)) >= -tol


@dataclass(frozen=True)
class PositiveUnitalMap:
    """``T(I) = I`` and ``T(sigma_i) = v[i] I + sum_j A[i, j] sigma_j``."""

    v: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=float).reshape(3)
        a = np.array(self.A, dtype=float).reshape(3, 3)
        v.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "A", a)

    @classmethod
    def from_channel(cls, ch: QubitChannelPT) -> "PositiveUnitalMap":
        if not ch.is_unital:
            raise ValueError("channel is not unital")
        return cls(ch.M[0, 1:], ch.M[1:, 1:].T)

    @property
    def pt(self) -> np.ndarray:
        m = np.zeros((4, 4))
        m[0, 0] = 1.0
        m[0, 1:] = self.v
        m[1:, 1:] = self.A.T
        return m

    def as_channel(self) -> QubitChannelPT:
        return QubitChannelPT(self.pt)

    def image(self, n) -> HermitianOp2:
        """``T(n . sigma)``."""
        n = np.asarray(n, dtype=float)
        return HermitianOp2(self.v @ n, self.A.T @ n)


def _margin(th: PositiveUnitalMap, ns):
    # T(I + n.sigma) = (1 + v.n) I + (A^T n).sigma
    return 1.0 + ns @ th.v - np.linalg.norm(ns @ th.A, axis=-1)


def positivity_margin(th: PositiveUnitalMap, samples: int = 2000, seed: int = 0):
    """Worst sampled value of ``1 + v.n - |A^T n|`` over unit ``n``.

    Samples a Fibonacci lattice of ``samples`` points plus as many seeded random
    points, then polishes the worst one by compass search. Returns
    ``(margin, n)``.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    ns = np.vstack([fibonacci_sphere(samples), random_unit(rng, samples)])
    vals = _margin(th, ns)
    k = int(np.argmin(vals))

    def f(ang):
        return float(_margin(th, from_angles(*ang)[None, :])[0])

    ang, val, _ = compass_descent(f, to_angles(ns[k]), step=0.05)
    if val < vals[k]:
        return val, from_angles(*ang)
    return float(vals[k]), ns[k]


def is_positive_unital(
    th: PositiveUnitalMap, samples: int = 2000, seed: int = 0, tol: float = POSITIVITY_TOL
) -> bool:
    margin, _ = positivity_margin(th, samples, seed)
    return margin >= -tol
