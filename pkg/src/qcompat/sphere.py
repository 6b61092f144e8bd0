"""Point sets on the unit sphere and a small derivative-free local search."""

from __future__ import annotations

import numpy as np

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def fibonacci_sphere(n: int) -> np.ndarray:
    """Deterministic near-uniform lattice of ``n`` unit vectors, shape ``(n, 3)``."""
    if n < 1:
        raise ValueError("n must be positive")
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = GOLDEN_ANGLE * np.arange(n)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def to_angles(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return np.array([np.arccos(np.clip(v[2], -1.0, 1.0)), np.arctan2(v[1], v[0])])


def from_angles(theta: float, phi: float) -> np.ndarray:
    st = np.sin(theta)
    return np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


def compass_descent(f, x0, step: float = 0.1, min_step: float = 1e-10, max_evals: int = 20000):
    """Coordinate-wise pattern search minimising ``f`` from ``x0``.

    Tries +/- ``step`` along each coordinate, keeps any improvement and halves
    the step once a full sweep fails. Returns ``(x, f(x), evaluations)``.
    """
    x = np.array(x0, dtype=float)
    fx = f(x)
    evals = 1
    while step > min_step and evals < max_evals:
        improved = False
        for i in range(x.size):
            for sgn in (1.0, -1.0):
                y = x.copy()
                y[i] += sgn * step
                fy = f(y)
                evals += 1
                if fy < fx:
                    x, fx, improved = y, fy, True
                    break
        if not improved:
            step *= 0.5
    return x, fx, evals
