"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL ...`` line to the terminal
before asserting, so ``pytest -s`` or ``pytest -v`` shows a readable scoreboard.
"""

import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_density
from qcompat.almost_quantum import (
    AlmostQuantumDecomposition,
    random_decomposition,
    theorem2_harness,
)
from qcompat.channels import PositiveUnitalMap, identity_channel
from qcompat.cli import region_rows
from qcompat.joint_maps import (
    certify_min_tensor_positivity,
    construct_min_tensor_joint,
    joint_choi,
    marginal_error,
    singlet_phi,
    singlet_phi_map,
)
from qcompat.lemmas import clifford_sweep, lemma2_sweep
from qcompat.pauli_core import PHI_PLUS, min_eig, pauli2_coeffs
from qcompat.quantum_joint import boundary_eta2, quantum_compatible, quantum_joint_channel

pytestmark = pytest.mark.acceptance

SQRT_HALF = 1 / np.sqrt(2)


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def _exact_class(a, b, tol):
    # closed-form predicates in exact rational arithmetic on the float grid values
    a, b, t = Fraction(a), Fraction(b), Fraction(tol)
    q = a * a + b * b + (1 - a - b) ** 2 <= 1 + t
    mt = a * a + b * b <= 1 + t
    return int(q), int(mt)


def test_criterion_1_region_reproduction(verdict):
    t0 = time.perf_counter()
    rows = region_rows(101)
    elapsed = time.perf_counter() - t0
    mismatches = 0
    for r in rows:
        q, mt = _exact_class(r["eta1"], r["eta2"], 1e-9)
        mismatches += (r["quantum"], r["almost_quantum"], r["min_tensor"]) != (q, q, mt)
    probes = region_rows(2, extra=[(2 / 3, 2 / 3), (2 / 3 + 1e-3, 2 / 3 + 1e-3),
                                   (SQRT_HALF, SQRT_HALF), (SQRT_HALF + 1e-3, SQRT_HALF + 1e-3)])[4:]
    boundary_ok = (
        probes[0]["quantum"] == 1 and probes[1]["quantum"] == 0
        and probes[2]["min_tensor"] == 1 and probes[3]["min_tensor"] == 0
    )
    ok = mismatches == 0 and len(rows) == 101 * 101 and boundary_ok and elapsed < 1.0
    verdict(1, ok, f"mismatches={mismatches} boundary_ok={boundary_ok} runtime={elapsed:.3f}s")


def _disk_points(rng, n, inside):
    pts = []
    while len(pts) < n:
        a, b = rng.uniform(0, 1, 2)
        if (a * a + b * b <= 1) == inside:
            pts.append((a, b))
    return pts


def test_criterion_2_constructive_min_tensor(verdict):
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    worst_inside, fewest_pairs, missed_outside, weakest_witness = np.inf, np.inf, 0, -np.inf
    for k, (a, b) in enumerate(_disk_points(rng, 200, inside=True)):
        c = certify_min_tensor_positivity(construct_min_tensor_joint(a, b), seed=k)
        worst_inside = min(worst_inside, c.worst_min_eig)
        fewest_pairs = min(fewest_pairs, c.grid * c.grid)
    for k, (a, b) in enumerate(_disk_points(rng, 200, inside=False)):
        c = certify_min_tensor_positivity(construct_min_tensor_joint(a, b), seed=k)
        if c.witness is None or c.worst_min_eig >= -1e-6:
            missed_outside += 1
        else:
            weakest_witness = max(weakest_witness, c.worst_min_eig)
    elapsed = time.perf_counter() - t0
    ok = worst_inside >= -1e-9 and fewest_pairs >= 40_000 and missed_outside == 0 and elapsed < 120
    verdict(2, ok, f"inside worst={worst_inside:.3e} lattice pairs>={fewest_pairs} "
                   f"outside missed={missed_outside} weakest witness={weakest_witness:.3e} "
                   f"runtime={elapsed:.1f}s")


def test_criterion_3_doubled_gamma_check(verdict):
    eta = SQRT_HALF
    j = construct_min_tensor_joint(eta, eta, 2 * eta * eta)
    c = certify_min_tensor_positivity(j)
    expected = 0.25 * (0.5 - SQRT_HALF)
    overlap = float(np.dot(*c.witness)) if c.witness is not None else float("nan")
    ok = (
        c.status == "violated"
        and abs(c.worst_min_eig - expected) <= 1e-3
        and abs(overlap + 0.5) <= 0.05
    )
    verdict(3, ok, f"worst={c.worst_min_eig:.5f} expected={expected:.5f}+-1e-3 n.m={overlap:.4f}")


def test_criterion_4_min_tensor_joint_not_cp(verdict):
    j = construct_min_tensor_joint(SQRT_HALF, SQRT_HALF)
    choi_min = min_eig(joint_choi(j))
    c = certify_min_tensor_positivity(j)
    ok = choi_min < -1e-3 and c.certified
    verdict(4, ok, f"choi min eig={choi_min:.4f} certificate={c.status} worst={c.worst_min_eig:.2e}")


def test_criterion_5_quantum_joint(verdict):
    rng = np.random.default_rng(77)
    points = [(2 / 3, 2 / 3)]
    for a in rng.uniform(0, 1, 25):
        points.append((a, boundary_eta2(a)))
    while len(points) < 51:
        a, b = rng.uniform(0, 1, 2)
        if quantum_compatible(a, b):
            points.append((a, b))
    worst_err, worst_eig = 0.0, np.inf
    for a, b in points:
        j = quantum_joint_channel(a, b)
        worst_err = max(worst_err, marginal_error(j, a, b))
        worst_eig = min(worst_eig, min_eig(joint_choi(j)))
    ok = worst_err <= 1e-9 and worst_eig >= -1e-9
    verdict(5, ok, f"points={len(points)} marginal err={worst_err:.2e} choi min eig={worst_eig:.2e}")


def test_criterion_6_phi_map(verdict):
    rng = np.random.default_rng(6)
    on_phi = singlet_phi(np.outer(PHI_PLUS, PHI_PLUS.conj()))
    phi_err = float(np.abs(on_phi.matrix + np.eye(2) / 2).max())
    phi = singlet_phi_map()
    worst = np.inf
    for _ in range(10_000):
        x = np.kron(random_density(rng, 2), random_density(rng, 2))
        w = np.einsum("amn,mn->a", phi.coeffs, pauli2_coeffs(x).real)
        worst = min(worst, w[0] - np.linalg.norm(w[1:]))
    choi_min = min_eig(joint_choi(phi))
    ok = phi_err <= 1e-12 and worst >= -1e-12 and choi_min < 0
    verdict(6, ok, f"|Phi(phi+) + I/2|={phi_err:.1e} product worst={worst:.2e} choi min eig={choi_min:.3f}")


def test_criterion_7_correlation_harness(verdict):
    ident = PositiveUnitalMap.from_channel(identity_channel())
    d = AlmostQuantumDecomposition(quantum_joint_channel(2 / 3, 2 / 3), ident, ident)
    rep = theorem2_harness(d, 2 / 3, 2 / 3)
    saturated = abs(rep.final_bound - 1) <= 1e-9 and rep.passed
    rng = np.random.default_rng(7)
    worst = -np.inf
    all_links = True
    for _ in range(20):
        dd, e1, e2 = random_decomposition(rng)
        r = theorem2_harness(dd, e1, e2)
        worst = max(worst, r.final_bound)
        all_links &= r.passed
    ok = saturated and worst <= 1 + 1e-9 and all_links
    verdict(7, ok, f"saturation bound={rep.final_bound:.12f} links={rep.passed} "
                   f"random worst bound={worst:.6f} random links={all_links}")


def test_criterion_8_lemma_suites(verdict):
    t0 = time.perf_counter()
    a = clifford_sweep(10_000, seed=8)
    b = lemma2_sweep(1_000_000, seed=8)
    elapsed = time.perf_counter() - t0
    ok = a["violations"] == 0 and b["violations"] == 0 and elapsed < 60
    verdict(8, ok, f"clifford violations={a['violations']} max sum={a['max_sum_of_squares']:.6f} "
                   f"lemma2 violations={b['violations']} min margin={b['min_margin']:.2e} "
                   f"runtime={elapsed:.1f}s")


def test_criterion_9_gap(verdict):
    rows = region_rows(101, extra=[(0.7071, 0.7071)])
    gap = {(round(r["eta1"], 4), round(r["eta2"], 4)) for r in rows
           if r["min_tensor"] == 1 and r["quantum"] == 0}
    ok = (0.9, 0.4) in gap and (0.7071, 0.7071) in gap
    verdict(9, ok, f"gap rows={len(gap)} has (0.9,0.4)={(0.9, 0.4) in gap} "
                   f"has (0.7071,0.7071)={(0.7071, 0.7071) in gap}")


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "qcompat", *argv],
                          capture_output=True, check=True).stdout


def test_criterion_10_determinism(verdict):
    region = [_cli("region", "--grid", "101", "--seed", "5") for _ in range(2)]
    cert = [_cli("certify", "0.7071", "0.7071", "--seed", "5") for _ in range(2)]
    ok = region[0] == region[1] and cert[0] == cert[1] and len(region[0]) > 0
    verdict(10, ok, f"region identical={region[0] == region[1]} certify identical={cert[0] == cert[1]}")
