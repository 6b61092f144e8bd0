"""Qubit operators in the Pauli basis and small dense Hermitian linear algebra.

Pauli order is (I, X, Y, Z); |0>, |1> are the +1/-1 eigenstates of Z.
Operators on C^2 (x) C^2 are plain ``(4, 4)`` complex arrays and operators on
three qubits are ``(8, 8)`` arrays; only qubit operators get a dedicated type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TAU_UNIT = 1e-12
EIG_TOL = 1e-11
POSITIVITY_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([I2, SX, SY, SZ])

# PAULI2[mu, nu] = sigma_mu (x) sigma_nu
PAULI2 = np.einsum("mab,ncd->mnacbd", PAULI, PAULI).reshape(4, 4, 4, 4)

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PHI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


class SolverError(RuntimeError):
    """Dense eigen-solver failed to converge."""


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def unit(v, tol: float = TAU_UNIT) -> np.ndarray:
    """Return ``v`` as a float array after checking it is a unit vector."""
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError(f"expected a unit vector, got norm {np.linalg.norm(v)!r}")
    return v


def bloch_op(v) -> np.ndarray:
    """Matrix of ``v . sigma``."""
    return np.einsum("i,iab->ab", np.asarray(v, dtype=float), PAULI[1:])


@dataclass(frozen=True)
class HermitianOp2:
    """Qubit operator ``a0 * I + a . sigma``."""

    a0: float
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(3)
        a.setflags(write=False)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", a)

    @classmethod
    def from_coeffs(cls, c) -> "HermitianOp2":
        c = np.asarray(c, dtype=float)
        return cls(c[0], c[1:])

    @classmethod
    def from_matrix(cls, m) -> "HermitianOp2":
        m = np.asarray(m, dtype=complex)
        c = np.einsum("kab,ba->k", PAULI, m).real / 2
        return cls.from_coeffs(c)

    @classmethod
    def effect(cls, n, sign: int = 1) -> "HermitianOp2":
        """Projector ``(I + sign * n . sigma) / 2`` for unit ``n``."""
        return cls(0.5, 0.5 * sign * np.asarray(n, dtype=float))

    @property
    def coeffs(self) -> np.ndarray:
        return np.concatenate([[self.a0], self.a])

    @property
    def matrix(self) -> np.ndarray:
        return self.a0 * I2 + bloch_op(self.a)

    @property
    def trace(self) -> float:
        return 2.0 * self.a0

    def __add__(self, other: "HermitianOp2") -> "HermitianOp2":
        return HermitianOp2(self.a0 + other.a0, self.a + other.a)

    def __sub__(self, other: "HermitianOp2") -> "HermitianOp2":
        return HermitianOp2(self.a0 - other.a0, self.a - other.a)

    def __mul__(self, s: float) -> "HermitianOp2":
        return HermitianOp2(s * self.a0, s * self.a)

    __rmul__ = __mul__

    def allclose(self, other: "HermitianOp2", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))


def eig2(h: HermitianOp2) -> tuple[float, float]:
    """Closed-form spectrum ``(a0 - |a|, a0 + |a|)``."""
    r = float(np.linalg.norm(h.a))
    return h.a0 - r, h.a0 + r


def is_effect(h: HermitianOp2, tol: float = POSITIVITY_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    lo, hi = eig2(h)
    return lo >= -tol and hi <= 1 + tol


def check_hermitian(h, tol: float = 1e-10) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if np.abs(h - h.conj().T).max() > tol:
        raise ValueError("matrix is not Hermitian")
    return h


def min_eig(h, tol: float = EIG_TOL) -> float:
    """Smallest eigenvalue of a dense Hermitian matrix.

    LAPACK's Hermitian driver is accurate to a few ulps of the spectral norm,
    far inside ``tol`` for the <= 8x8 operators used here.
    """
    h = check_hermitian(h)
    try:
        w = np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise SolverError(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise SolverError("non-finite eigenvalues")
    return float(w[0])


def kron(a, b, max_dim: int = 8) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] * b.shape[0] > max_dim:
        raise ValueError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds {max_dim}"
        )
    return np.kron(a, b)


def pauli2_coeffs(x) -> np.ndarray:
    """Coefficients ``x[mu, nu]`` with ``X = sum x[mu, nu] sigma_mu (x) sigma_nu``."""
    x = np.asarray(x, dtype=complex)
    return np.einsum("mnab,ba->mn", PAULI2, x) / 4


def from_pauli2_coeffs(c) -> np.ndarray:
    return np.einsum("mn,mnab->ab", np.asarray(c), PAULI2)
