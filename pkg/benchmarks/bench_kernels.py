"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--grid 200] [--pairs 100000] [--dists 1000000]
"""

import argparse
import time

import numpy as np

from qcompat import _kernels as k
from qcompat.joint_maps import construct_min_tensor_joint
from qcompat.sphere import fibonacci_sphere, random_unit


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=200)
    ap.add_argument("--pairs", type=int, default=100_000)
    ap.add_argument("--dists", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if k.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    coeffs = np.ascontiguousarray(construct_min_tensor_joint(0.7, 0.6).coeffs)
    pts = fibonacci_sphere(args.grid)
    ns, ms = random_unit(rng, args.pairs), random_unit(rng, args.pairs)
    p = rng.dirichlet(np.ones(8), args.dists)

    cases = [
        (f"lattice_row_min ({args.grid}^2 pairs)",
         lambda: k.lattice_row_min_np(coeffs, pts), lambda: k.lattice_row_min_nb(coeffs, pts)),
        (f"product_min_eig ({args.pairs} pairs)",
         lambda: k.product_min_eig_np(coeffs, ns, ms), lambda: k.product_min_eig_nb(coeffs, ns, ms)),
        (f"lemma2_margins ({args.dists} rows)",
         lambda: k.lemma2_margins_np(p), lambda: k.lemma2_margins_nb(p)),
    ]
    print(f"{'kernel':<36}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, f_np, f_nb in cases:
        f_nb()  # compile
        t_np = best_of(f_np, args.repeat)
        t_nb = best_of(f_nb, args.repeat)
        print(f"{name:<36}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
