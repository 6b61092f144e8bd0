"""Almost-quantum decompositions ``J = Psi o (T1 (x) T2)`` and the tripartite
correlation argument that bounds their noisy-identity marginals.

The harness rebuilds every quantity of the only-if argument from a concrete
decomposition: the frame (e1, e2, e3, p, q, r, s) extracted from the positive
maps, the three-qubit probe state obtained from the singlet, the anticommuting
triple and the derived correlation inequalities.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from .channels import PositiveUnitalMap, is_positive_unital
from .joint_maps import BilinearJointMap, joint_choi, marginal_error
from .lemmas import TripartiteDistribution, check_lemma2, tripartite_correlators
from .pauli_core import I2, PAULI, POSITIVITY_TOL, bloch_op, min_eig
from .quantum_joint import quantum_compatible

DEGENERATE_TOL = 1e-9


def almost_quantum_compatible(eta1: float, eta2: float, tol: float = POSITIVITY_TOL) -> bool:
    # same region as quantum compatibility for noisy identities
    return quantum_compatible(eta1, eta2, tol)


def singlet_channel() -> BilinearJointMap:
    """``X -> <phi-|X|phi-> I``."""
    c = np.zeros((4, 4, 4))
    c[0, 0, 0] = 1.0
    for i in range(1, 4):
        c[0, i, i] = -1.0
    return BilinearJointMap(c)


@dataclass(frozen=True)
class BipartiteChannel:
    """Unital CP map L(C^2 (x) C^2) -> L(C^2)."""

    joint: BilinearJointMap

    @cached_property
    def choi(self) -> np.ndarray:
        return joint_choi(self.joint)

    def check(self, tol: float = POSITIVITY_TOL) -> None:
        c = self.joint.coeffs
        if not np.allclose(c[:, 0, 0], [1, 0, 0, 0], rtol=0, atol=tol):
            raise ValueError("Psi is not unital")
        if min_eig(self.choi) < -tol:
            raise ValueError("Psi is not completely positive")


@dataclass(frozen=True)
class AlmostQuantumDecomposition:
    psi: BipartiteChannel
    theta1: PositiveUnitalMap
    theta2: PositiveUnitalMap

    def __post_init__(self):
        if isinstance(self.psi, BilinearJointMap):
            object.__setattr__(self, "psi", BipartiteChannel(self.psi))

    def check(self, tol: float = POSITIVITY_TOL, samples: int = 2000, seed: int = 0) -> None:
        self.psi.check(tol)
        for th in (self.theta1, self.theta2):
            if not is_positive_unital(th, samples, seed, tol):
                raise ValueError("theta is not positive")


def compose_decomposition(d: AlmostQuantumDecomposition) -> BilinearJointMap:
    return d.psi.joint.precompose(d.theta1.pt, d.theta2.pt)


# --- proof frame ------------------------------------------------------------

_AXES = np.eye(3)


def _complement_projector(normals):
    """Projector onto the orthogonal complement of ``span(normals)``."""
    basis = []
    for n in normals:
        w = np.array(n, dtype=float)
        for b in basis:
            w = w - (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > DEGENERATE_TOL:
            basis.append(w / nw)
    p = np.eye(3)
    for b in basis:
        p -= np.outer(b, b)
    return p


def _pick(proj, order):
    """Normalised projection of the coordinate axis (in ``order``) with the
    largest projected length; earlier axes win ties."""
    best, best_norm = None, DEGENERATE_TOL
    for k in order:
        w = proj @ _AXES[k]
        nw = np.linalg.norm(w)
        if nw > best_norm + 1e-12:
            best, best_norm = w / nw, nw
    if best is None:
        raise ValueError("empty subspace")
    return best


def _split(w, axis):
    """Write ``w = y (sin t * axis + cos t * u)`` with ``u`` unit, ``u . axis = 0``,
    ``y >= 0`` and ``y cos t <= 0``. Returns ``(y, t, u, degenerate)``."""
    along = float(w @ axis)
    perp = w - along * axis
    y = float(np.linalg.norm(w))
    pn = float(np.linalg.norm(perp))
    if pn <= DEGENERATE_TOL:
        u = _pick(np.eye(3) - np.outer(axis, axis), (0, 1, 2))
        return y, float(np.arctan2(along, 0.0)), u, True
    u = -perp / pn
    return y, float(np.arctan2(along, -pn)), u, False


@dataclass
class ProofFrame:
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    s: np.ndarray
    x1: float
    y1: float
    z2: float
    zp2: float
    y2: float
    theta1_angle: float
    theta2_angle: float
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, np.ndarray):
                d[k] = v.tolist()
        return d


def proof_frame(theta1: PositiveUnitalMap, theta2: PositiveUnitalMap) -> ProofFrame:
    """Frame adapted to the two positive maps.

    ``e2`` is orthogonal to both ``v`` vectors (so both images of ``e2.sigma``
    are traceless) and ``e1`` is orthogonal to ``theta1.v``. Orientation of
    ``(e1, e3)`` is fixed so that the identity part of ``theta2(e3.sigma)`` is
    non-negative.
    """
    notes = []
    degenerate = False
    normals1 = [theta1.v] if np.linalg.norm(theta1.v) > DEGENERATE_TOL else []
    normals2 = [theta2.v] if np.linalg.norm(theta2.v) > DEGENERATE_TOL else []

    e2 = _pick(_complement_projector(normals1 + normals2), (1, 0, 2))
    e1 = _pick(_complement_projector(normals1 + [e2]), (0, 1, 2))
    e3 = np.cross(e1, e2)
    if theta2.v @ e3 < 0:
        e1, e3 = -e1, -e3

    img1 = theta1.image(e1)
    x1 = float(np.linalg.norm(img1.a))
    if x1 <= DEGENERATE_TOL:
        degenerate = True
        notes.append("x1 == 0")
        p = e1.copy()
    else:
        p = img1.a / x1
    y1, t1, q, deg = _split(theta1.image(e2).a, p)
    if deg:
        degenerate = True
        notes.append("theta1(e2.sigma) parallel to p")

    img3 = theta2.image(e3)
    zp2 = float(img3.a0)
    z2 = float(np.linalg.norm(img3.a))
    if z2 <= DEGENERATE_TOL:
        degenerate = True
        notes.append("z2 == 0")
        r = e3.copy()
    else:
        r = img3.a / z2
    y2, t2, s, deg = _split(theta2.image(e2).a, r)
    if deg:
        degenerate = True
        notes.append("theta2(e2.sigma) parallel to r")

    return ProofFrame(e1, e2, e3, p, q, r, s, x1, y1, z2, zp2, y2, t1, t2, degenerate, notes)


# --- harness ----------------------------------------------------------------


def probe_state(psi: BilinearJointMap) -> np.ndarray:
    """``(id (x) Psi*)(|phi-><phi-|)`` on K (x) H1 (x) H2 as an 8x8 matrix."""
    # |phi-><phi-| = (I I - X X - Y Y - Z Z) / 4
    signs = (1.0, -1.0, -1.0, -1.0)
    rho = np.zeros((8, 8), dtype=complex)
    for a in range(4):
        rho += signs[a] * np.kron(PAULI[a], psi.dual(PAULI[a]))
    return rho / 4


def _kron3(a, b, c):
    return np.kron(np.kron(a, b), c)


def anticommuting_triple(frame: ProofFrame) -> list[np.ndarray]:
    f = frame
    return [
        _kron3(bloch_op(f.e1), bloch_op(f.p), I2),
        _kron3(bloch_op(f.e3), I2, bloch_op(f.r)),
        _kron3(I2, bloch_op(f.q), bloch_op(f.s)),
    ]


def _expect(rho, op) -> float:
    return float(np.trace(rho @ op).real)


def frame_distribution(rho: np.ndarray, frame: ProofFrame) -> TripartiteDistribution:
    p = np.empty((2, 2, 2))
    for a in range(2):
        ea = (I2 + (-1) ** a * bloch_op(frame.e2)) / 2
        for b in range(2):
            eb = (I2 + (-1) ** b * bloch_op(frame.q)) / 2
            for c in range(2):
                ec = (I2 + (-1) ** c * bloch_op(frame.s)) / 2
                p[a, b, c] = _expect(rho, _kron3(ea, eb, ec))
    # clip round-off so validation sees a distribution
    p = np.clip(p, 0.0, None)
    return TripartiteDistribution(p / p.sum())


@dataclass
class HarnessReport:
    eta1: float
    eta2: float
    tol: float
    frame: ProofFrame
    rho_trace: float
    rho_min_eig: float
    correlators: tuple[float, float, float]
    anticommutator_norms: tuple[float, float, float]
    p12: float
    p13: float
    p23: float
    p12_closed_form: float
    p13_closed_form: float
    links: dict[str, dict]
    final_bound: float
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["frame"] = self.frame.to_dict()
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def theorem2_harness(
    d: AlmostQuantumDecomposition, eta1: float, eta2: float, tol: float = POSITIVITY_TOL
) -> HarnessReport:
    """Evaluate the tripartite-correlation bound for a concrete decomposition.

    Each link reports ``margin`` (non-negative when it holds) and ``ok``.
    """
    joint = compose_decomposition(d)
    err = marginal_error(joint, eta1, eta2)
    if err > tol:
        raise ValueError(f"marginals deviate from (L_{eta1}, L_{eta2}) by {err:.3e}")
    if eta1 + eta2 < 1.0 - tol:
        raise ValueError("the harness needs eta1 + eta2 >= 1")
    frame = proof_frame(d.theta1, d.theta2)
    if frame.degenerate:
        raise ValueError(f"degenerate proof frame: {', '.join(frame.notes)}")

    rho = probe_state(d.psi.joint)
    triple = anticommuting_triple(frame)
    t = tuple(_expect(rho, e) for e in triple)
    anti = tuple(
        float(np.linalg.norm(triple[i] @ triple[k] + triple[k] @ triple[i], 2))
        for i, k in ((0, 1), (0, 2), (1, 2))
    )

    dist = frame_distribution(rho, frame)
    p12, p23, p13 = tripartite_correlators(dist)
    c1 = frame.y1 * np.cos(frame.theta1_angle)
    c2 = frame.y2 * np.cos(frame.theta2_angle)
    p12_cf = -eta1 / c1
    p13_cf = -eta2 / c2

    first = eta1**2 / frame.x1**2
    second = eta2**2 / frame.z2**2
    clifford = sum(x * x for x in t)
    final = first + second + (eta1 + eta2 - 1.0) ** 2

    links = {
        "first_correlator": {"value": t[0] ** 2, "expected": first, "margin": -abs(t[0] ** 2 - first)},
        "second_correlator": {"value": t[1] ** 2, "expected": second, "margin": -abs(t[1] ** 2 - second)},
        "p12_closed_form": {"value": p12, "expected": p12_cf, "margin": -abs(p12 - p12_cf)},
        "p13_closed_form": {"value": p13, "expected": p13_cf, "margin": -abs(p13 - p13_cf)},
        "p12_ge_eta1": {"value": p12, "margin": p12 - eta1},
        "p13_ge_eta2": {"value": p13, "margin": p13 - eta2},
        "lemma2": {"value": p23, "margin": p23 - (p12 + p13 - 1.0)},
        "p23_ge_eta_sum": {"value": t[2], "margin": t[2] - (eta1 + eta2 - 1.0)},
        "clifford_sum": {"value": clifford, "margin": 1.0 - clifford},
        "final_bound": {"value": final, "margin": 1.0 - final},
        "x1_le_1": {"value": frame.x1, "margin": 1.0 - frame.x1},
        "z2_le_1": {"value": frame.z2, "margin": 1.0 - frame.z2},
        "zp2_range": {"value": frame.zp2, "margin": min(frame.zp2, 1.0 - frame.zp2)},
    }
    for link in links.values():
        link["ok"] = bool(link["margin"] >= -tol)
    links["lemma2"]["ok"] = links["lemma2"]["ok"] and check_lemma2(dist, tol)
    return HarnessReport(
        eta1=eta1,
        eta2=eta2,
        tol=tol,
        frame=frame,
        rho_trace=float(np.trace(rho).real),
        rho_min_eig=min_eig(rho),
        correlators=t,
        anticommutator_norms=anti,
        p12=p12,
        p13=p13,
        p23=p23,
        p12_closed_form=float(p12_cf),
        p13_closed_form=float(p13_cf),
        links=links,
        final_bound=float(final),
        passed=all(link["ok"] for link in links.values()),
    )


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_decomposition(rng: np.random.Generator, shrink: float = 0.9):
    """Valid decomposition with noisy-identity marginals and ``eta1 + eta2 >= 1``.

    Starts from the cloner joint at a boundary point ``(b1, b2)``, depolarises
    each slot by a factor in ``[shrink, 1]`` and hides random rotations
    between ``Psi`` and the positive maps. Returns ``(d, eta1, eta2)``.
    """
    from .quantum_joint import boundary_eta2, quantum_joint_channel

    while True:
        b1 = rng.uniform(0.0, 1.0)
        b2 = boundary_eta2(b1)
        t1, t2 = rng.uniform(shrink, 1.0, 2)
        eta1, eta2 = b1 * t1, b2 * t2
        if eta1 + eta2 >= 1.0:
            break
    rots = [random_rotation(rng) for _ in range(2)]
    undo = []
    thetas = []
    for rot, t in zip(rots, (t1, t2)):
        m = np.eye(4)
        m[1:, 1:] = rot
        undo.append(m)
        thetas.append(PositiveUnitalMap(np.zeros(3), t * rot))
    psi = quantum_joint_channel(b1, b2).precompose(undo[0], undo[1])
    return AlmostQuantumDecomposition(BipartiteChannel(psi), thetas[0], thetas[1]), eta1, eta2
