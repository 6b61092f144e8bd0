"""Hot loops of the positivity sweeps.

Each kernel has a numba version and a vectorised numpy version with identical
semantics. ``QCOMPAT_BACKEND=numpy`` forces the numpy path; the default is
numba when it imports. ``QCOMPAT_NUM_THREADS`` caps numba's thread pool.
"""

from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("QCOMPAT_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"QCOMPAT_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    if _requested != "numba":
        raise ImportError
    import numba
    from numba import njit
except ImportError:
    numba = None

BACKEND = "numba" if numba is not None else "numpy"

if numba is not None and os.environ.get("QCOMPAT_NUM_THREADS"):
    numba.set_num_threads(int(os.environ["QCOMPAT_NUM_THREADS"]))


# --- numpy -----------------------------------------------------------------


def _halves(v):
    # (I + v . sigma) / 2 as Pauli coefficients
    out = np.empty((v.shape[0], 4))
    out[:, 0] = 0.5
    out[:, 1:] = 0.5 * v
    return out


def _min_eig_from_coeffs(out):
    return out[..., 0] - np.sqrt(np.sum(out[..., 1:] ** 2, axis=-1))


def product_min_eig_np(coeffs, ns, ms):
    e = _halves(ns)
    f = _halves(ms)
    out = np.einsum("amn,km,kn->ka", coeffs, e, f)
    return _min_eig_from_coeffs(out)


def lattice_row_min_np(coeffs, pts, chunk=256):
    g = pts.shape[0]
    e = _halves(pts)
    t = np.einsum("amn,im->ian", coeffs, e)
    row_min = np.empty(g)
    row_arg = np.empty(g, dtype=np.int64)
    for start in range(0, g, chunk):
        out = np.einsum("ian,jn->ija", t[start:start + chunk], e)
        vals = _min_eig_from_coeffs(out)
        row_arg[start:start + chunk] = np.argmin(vals, axis=1)
        row_min[start:start + chunk] = vals.min(axis=1)
    return row_min, row_arg


def lemma2_margins_np(p):
    # index = 4a + 2b + c
    sign12 = np.array([1, 1, -1, -1, -1, -1, 1, 1], dtype=float)
    sign23 = np.array([1, -1, -1, 1, 1, -1, -1, 1], dtype=float)
    sign13 = np.array([1, -1, 1, -1, -1, 1, -1, 1], dtype=float)
    return p @ sign23 - (p @ sign12 + p @ sign13 - 1.0)


# --- numba -----------------------------------------------------------------

if numba is not None:

    @njit(cache=True)
    def _pair_value(coeffs, n, m):
        e0 = 0.5
        f0 = 0.5
        o0 = 0.0
        o1 = 0.0
        o2 = 0.0
        o3 = 0.0
        for mu in range(4):
            em = e0 if mu == 0 else 0.5 * n[mu - 1]
            for nu in range(4):
                fn = f0 if nu == 0 else 0.5 * m[nu - 1]
                w = em * fn
                o0 += coeffs[0, mu, nu] * w
                o1 += coeffs[1, mu, nu] * w
                o2 += coeffs[2, mu, nu] * w
                o3 += coeffs[3, mu, nu] * w
        return o0 - np.sqrt(o1 * o1 + o2 * o2 + o3 * o3)

    @njit(cache=True)
    def product_min_eig_nb(coeffs, ns, ms):
        k = ns.shape[0]
        out = np.empty(k)
        for i in range(k):
            out[i] = _pair_value(coeffs, ns[i], ms[i])
        return out

    @njit(cache=True)
    def lattice_row_min_nb(coeffs, pts):
        g = pts.shape[0]
        row_min = np.empty(g)
        row_arg = np.empty(g, dtype=np.int64)
        for i in range(g):
            best = np.inf
            arg = 0
            for j in range(g):
                v = _pair_value(coeffs, pts[i], pts[j])
                if v < best:
                    best = v
                    arg = j
            row_min[i] = best
            row_arg[i] = arg
        return row_min, row_arg

    @njit(cache=True)
    def lemma2_margins_nb(p):
        n = p.shape[0]
        out = np.empty(n)
        for k in range(n):
            p12 = 0.0
            p23 = 0.0
            p13 = 0.0
            for idx in range(8):
                a = idx >> 2
                b = (idx >> 1) & 1
                c = idx & 1
                w = p[k, idx]
                p12 += w if a == b else -w
                p23 += w if b == c else -w
                p13 += w if a == c else -w
            out[k] = p23 - (p12 + p13 - 1.0)
        return out


def product_min_eig(coeffs, ns, ms):
    """Min eigenvalue of J((I + n.s)/2 (x) (I + m.s)/2) for each row pair."""
    coeffs = np.ascontiguousarray(coeffs, dtype=float)
    ns = np.ascontiguousarray(ns, dtype=float)
    ms = np.ascontiguousarray(ms, dtype=float)
    if BACKEND == "numba":
        return product_min_eig_nb(coeffs, ns, ms)
    return product_min_eig_np(coeffs, ns, ms)


def lattice_row_min(coeffs, pts):
    """Per-row minimum and argmin over all ordered pairs of lattice points."""
    coeffs = np.ascontiguousarray(coeffs, dtype=float)
    pts = np.ascontiguousarray(pts, dtype=float)
    if BACKEND == "numba":
        return lattice_row_min_nb(coeffs, pts)
    return lattice_row_min_np(coeffs, pts)


def lemma2_margins(p):
    """``p23 - (p12 + p13 - 1)`` for each row of an ``(N, 8)`` distribution array."""
    p = np.ascontiguousarray(p, dtype=float)
    if BACKEND == "numba":
        return lemma2_margins_nb(p)
    return lemma2_margins_np(p)
