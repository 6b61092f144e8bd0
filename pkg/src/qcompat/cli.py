"""Command line front end.

    qcompat region  --grid 101 --out region.csv --format csv --seed 0
    qcompat certify 0.7071 0.7071 --cert-grid 200 --cert-samples 10000
    qcompat lemmas  --seed 42 --samples 100000

Exit codes: 0 success, 2 validation error, 3 a certification failed where the
theory predicts success.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .almost_quantum import almost_quantum_compatible
from .joint_maps import (
    certify_min_tensor_positivity,
    construct_min_tensor_joint,
    joint_choi,
    marginal_error,
    min_tensor_compatible,
)
from .lemmas import (
    TripartiteDistribution,
    check_lemma2,
    clifford_sweep,
    jm_margins,
    lemma2_sweep,
    tripartite_correlators,
)
from .pauli_core import POSITIVITY_TOL, min_eig
from .quantum_joint import quantum_compatible, quantum_joint_channel

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ALARM = 3

REGION_HEADER = ["eta1", "eta2", "quantum", "almost_quantum", "min_tensor", "class"]


class ValidationError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def classify(eta1: float, eta2: float, tol: float = POSITIVITY_TOL) -> dict:
    q = quantum_compatible(eta1, eta2, tol)
    aq = almost_quantum_compatible(eta1, eta2, tol)
    mt = min_tensor_compatible(eta1, eta2, tol)
    label = "quantum" if q else ("min_tensor_only" if mt else "incompatible")
    return {
        "eta1": eta1,
        "eta2": eta2,
        "quantum": int(q),
        "almost_quantum": int(aq),
        "min_tensor": int(mt),
        "class": label,
    }


def region_rows(grid_n: int = 101, tol: float = POSITIVITY_TOL, extra=()) -> list[dict]:
    """Classify every point of an inclusive ``grid_n x grid_n`` grid on [0, 1]^2,
    followed by any ``extra`` points, in that order."""
    if grid_n < 2:
        raise ValidationError("grid must have at least 2 points per axis")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    axis = np.linspace(0.0, 1.0, grid_n)
    e1, e2 = np.meshgrid(axis, axis, indexing="ij")
    e1, e2 = e1.ravel(), e2.ravel()
    q = e1**2 + e2**2 + (1.0 - e1 - e2) ** 2 <= 1.0 + tol
    mt = e1**2 + e2**2 <= 1.0 + tol
    rows = [
        {
            "eta1": float(a),
            "eta2": float(b),
            "quantum": int(qq),
            "almost_quantum": int(qq),
            "min_tensor": int(m),
            "class": "quantum" if qq else ("min_tensor_only" if m else "incompatible"),
        }
        for a, b, qq, m in zip(e1, e2, q, mt)
    ]
    for a, b in extra:
        _check_eta(a, b)
        rows.append(classify(a, b, tol))
    return rows


def render_region(rows, fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REGION_HEADER)
    for r in rows:
        w.writerow([_fmt(r["eta1"]), _fmt(r["eta2"])] + [r[k] for k in REGION_HEADER[2:]])
    return buf.getvalue()


def _check_eta(eta1: float, eta2: float) -> None:
    for eta in (eta1, eta2):
        if not (0.0 <= eta <= 1.0):
            raise ValidationError(f"eta must lie in [0, 1], got {eta!r}")


def certify_report(
    eta1: float,
    eta2: float,
    cert_grid: int = 200,
    cert_samples: int = 10_000,
    seed: int = 0,
    tol: float = POSITIVITY_TOL,
    gamma: float | None = None,
) -> tuple[dict, bool]:
    """Report for one point and whether a regression alarm was raised."""
    _check_eta(eta1, eta2)
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if cert_grid < 8:
        raise ValidationError("cert-grid must be at least 8")
    alarm = False
    report = {"eta1": eta1, "eta2": eta2, "predicates": classify(eta1, eta2, tol)}

    joint = construct_min_tensor_joint(eta1, eta2, gamma)
    cert = certify_min_tensor_positivity(joint, cert_grid, cert_samples, seed, tol)
    report["min_tensor_joint"] = {
        "gamma": float(joint.coeffs[0, 1, 1]),
        "certificate": cert.to_dict(),
        "choi_min_eig": min_eig(joint_choi(joint)),
    }
    if gamma is None and min_tensor_compatible(eta1, eta2, tol) and not cert.certified:
        alarm = True

    if quantum_compatible(eta1, eta2, tol):
        qj = quantum_joint_channel(eta1, eta2)
        choi_min = min_eig(joint_choi(qj))
        merr = marginal_error(qj, eta1, eta2)
        report["quantum_joint"] = {
            "constructed": True,
            "choi_min_eig": choi_min,
            "marginal_error": merr,
        }
        if choi_min < -tol or merr > tol:
            alarm = True
    else:
        report["quantum_joint"] = {"constructed": False, "reason": "outside the quantum region"}

    doubled = construct_min_tensor_joint(eta1, eta2, 2.0 * eta1 * eta2)
    pcert = certify_min_tensor_positivity(doubled, cert_grid, cert_samples, seed, tol)
    report["doubled_gamma_check"] = {
        "gamma": 2.0 * eta1 * eta2,
        "certificate": pcert.to_dict(),
    }
    report["alarm"] = alarm
    return report, alarm


def _read_distribution(path: str) -> TripartiteDistribution:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read distribution: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("p")
    try:
        arr = np.asarray(data, dtype=float)
        if arr.size != 8:
            raise ValueError("expected 8 probabilities")
        return TripartiteDistribution(arr)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"invalid distribution: {exc}") from exc


def lemmas_summary(
    seed: int = 0, samples: int = 1_000_000, clifford_samples: int = 10_000,
    jm_samples: int = 100_000, distribution: str | None = None,
) -> dict:
    # validate user input before running the sweeps
    d = _read_distribution(distribution) if distribution is not None else None
    summary = {
        "seed": seed,
        "clifford": clifford_sweep(clifford_samples, seed),
        "lemma2": lemma2_sweep(samples, seed),
    }

    rng = np.random.default_rng(seed)
    x = rng.standard_normal((jm_samples, 3))
    y = rng.standard_normal((jm_samples, 3))
    x *= (rng.random(jm_samples) ** (1 / 3) / np.linalg.norm(x, axis=1))[:, None]
    y *= (rng.random(jm_samples) ** (1 / 3) / np.linalg.norm(y, axis=1))[:, None]
    quad = 1 + np.sum(x * y, axis=1) ** 2 - np.sum(x * x, axis=1) - np.sum(y * y, axis=1)
    tri = 2 - np.linalg.norm(x + y, axis=1) - np.linalg.norm(x - y, axis=1)
    disagree = int(np.sum((quad >= 0) != (tri >= 0)))
    summary["jm_equivalence"] = {
        "samples": jm_samples,
        "violations": disagree,
        "min_abs_margin": float(np.minimum(np.abs(quad), np.abs(tri)).min()),
        "spot_check": jm_margins([1, 0, 0], [0, 1, 0]),
    }

    if d is not None:
        p12, p23, p13 = tripartite_correlators(d)
        ok = check_lemma2(d)
        summary["distribution"] = {
            "p12": p12, "p23": p23, "p13": p13, "violations": int(not ok),
        }
    summary["violations"] = sum(
        v["violations"] for k, v in summary.items() if isinstance(v, dict) and "violations" in v
    )
    return summary


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcompat", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("region", help="classify an (eta1, eta2) grid")
    r.add_argument("--grid", type=int, default=101)
    r.add_argument("--out", default=None, help="output file (default stdout)")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.add_argument("--seed", type=int, default=0, help="accepted for a uniform interface")
    r.add_argument("--tol", type=float, default=POSITIVITY_TOL)
    r.add_argument(
        "--include", action="append", default=[], metavar="ETA1,ETA2",
        help="extra point appended after the grid (repeatable)",
    )

    c = sub.add_parser("certify", help="construct and certify joint maps at one point")
    c.add_argument("eta1", type=float)
    c.add_argument("eta2", type=float)
    c.add_argument("--cert-grid", type=int, default=200)
    c.add_argument("--cert-samples", type=int, default=10_000)
    c.add_argument("--tol", type=float, default=POSITIVITY_TOL)
    c.add_argument("--gamma", type=float, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default=None)

    m = sub.add_parser("lemmas", help="run the lemma property sweeps")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--samples", type=int, default=1_000_000, help="simplex draws")
    m.add_argument("--clifford-samples", type=int, default=10_000)
    m.add_argument("--jm-samples", type=int, default=100_000)
    m.add_argument("--distribution", default=None, help="JSON file with 8 probabilities")
    m.add_argument("--out", default=None)
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_point(s: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in s.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad point {s!r}, expected ETA1,ETA2") from exc
    return a, b


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "region":
            extra = [_parse_point(s) for s in args.include]
            rows = region_rows(args.grid, args.tol, extra)
            _emit(render_region(rows, args.format), args.out)
            return EXIT_OK
        if args.command == "certify":
            report, alarm = certify_report(
                args.eta1, args.eta2, args.cert_grid, args.cert_samples,
                args.seed, args.tol, args.gamma,
            )
            _emit(json.dumps(report, indent=2) + "\n", args.out)
            return EXIT_ALARM if alarm else EXIT_OK
        if args.command == "lemmas":
            summary = lemmas_summary(
                args.seed, args.samples, args.clifford_samples, args.jm_samples,
                args.distribution,
            )
            _emit(json.dumps(summary, indent=2) + "\n", args.out)
            return EXIT_ALARM if summary["violations"] else EXIT_OK
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
