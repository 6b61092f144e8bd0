"""Quantum compatibility of noisy identities and an explicit CP joint channel.

The joint channel on the boundary comes from an asymmetric cloner isometry
``V: C^2 -> B (x) C (x) E``,

    V|psi> = alpha |psi>_B |phi+>_CE + beta |psi>_C |phi+>_BE,

with ``alpha = sqrt(1 - eta2)`` and ``beta = sqrt(1 - eta1)``; the joint map is
``Z -> V^dag (Z (x) I_E) V``. Interior points add depolarisation on one slot.
"""

from __future__ import annotations

import math

import numpy as np

from .channels import noisy_identity
from .joint_maps import BilinearJointMap
from .pauli_core import PHI_PLUS, POSITIVITY_TOL

BOUNDARY_TOL = 1e-9


class IncompatibleError(ValueError):
    """Parameters outside the quantum compatibility region."""


def _region_lhs(eta1: float, eta2: float) -> float:
    return eta1 * eta1 + eta2 * eta2 + (1.0 - eta1 - eta2) ** 2


def quantum_compatible(eta1: float, eta2: float, tol: float = POSITIVITY_TOL) -> bool:
    return _region_lhs(eta1, eta2) <= 1.0 + tol


def boundary_eta2(eta1: float) -> float:
    """Largest ``eta2`` with ``(eta1, eta2)`` quantum compatible."""
    if not 0.0 <= eta1 <= 1.0:
        raise ValueError(f"eta1 must lie in [0, 1], got {eta1!r}")
    disc = max((1.0 - eta1) * (1.0 + 3.0 * eta1), 0.0)
    return min(max(((1.0 - eta1) + math.sqrt(disc)) / 2.0, 0.0), 1.0)


def cloner_params(eta1: float, eta2: float) -> tuple[float, float]:
    return math.sqrt(max(1.0 - eta2, 0.0)), math.sqrt(max(1.0 - eta1, 0.0))


def cloner_isometry(eta1: float, eta2: float) -> np.ndarray:
    """8x2 isometry, output ordering B (x) C (x) E."""
    if abs(_region_lhs(eta1, eta2) - 1.0) > BOUNDARY_TOL or eta1 + eta2 < 1.0 - BOUNDARY_TOL:
        raise ValueError(
            f"({eta1}, {eta2}) is not on the quantum boundary with eta1 + eta2 >= 1"
        )
    alpha, beta = cloner_params(eta1, eta2)
    phi = PHI_PLUS.reshape(2, 2)
    v = np.zeros((2, 2, 2, 2), dtype=complex)  # [b, c, e, in]
    for k in range(2):
        v[k, :, :, k] += alpha * phi
        v[:, k, :, k] += beta * phi
    return v.reshape(8, 2)


def isometry_joint_map(v: np.ndarray) -> BilinearJointMap:
    """Heisenberg map ``Z -> V^dag (Z (x) I_E) V`` on Z in L(B (x) C)."""
    ie = np.eye(2)
    return BilinearJointMap.from_function(lambda z: v.conj().T @ np.kron(z, ie) @ v)


def quantum_joint_channel(eta1: float, eta2: float) -> BilinearJointMap:
    """CP joint map with marginals ``(L_eta1, L_eta2)``."""
    if not (0.0 <= eta1 <= 1.0 and 0.0 <= eta2 <= 1.0):
        raise ValueError("eta must lie in [0, 1]")
    if not quantum_compatible(eta1, eta2, BOUNDARY_TOL):
        raise IncompatibleError(f"({eta1}, {eta2}) is not quantum compatible")
    top = boundary_eta2(eta1)
    base = isometry_joint_map(cloner_isometry(eta1, top))
    if top <= 0.0 or eta2 >= top:
        return base
    return base.precompose(np.eye(4), noisy_identity(eta2 / top))
