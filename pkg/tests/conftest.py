import numpy as np
import pytest

from qcompat.pauli_core import PHI_MINUS, PHI_PLUS, projector

SQRT_HALF = 1 / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def phi_plus():
    return projector(PHI_PLUS)


@pytest.fixture
def phi_minus():
    return projector(PHI_MINUS)


def random_density(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2
