#!/usr/bin/env python3
"""Benchmark the jit-compiled kernels against the pure-Python backend.

Times ``poly_jet`` (value/gradient/Hessian of a dense polynomial) and
``det`` (small-matrix determinant) in both forms inside one process.
The jitted column only appears when numba is importable and
CONDSYM_DISABLE_NUMBA is unset.

Usage:
    python3 benchmarks/bench_kernels.py [--dim N] [--degree D]
        [--points P] [--det-size S] [--matrices M] [--repeat R]
"""

import argparse
import time

import numpy as np

from condsym import _kernels
from condsym.fields import monomial_table


def best_per_call(fn, args_list, repeat):
    """Best wall time per call over `repeat` passes of the whole batch."""
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        dt = time.perf_counter() - t0
        best = min(best, dt / len(args_list))
    return best


def poly_inputs(dim, degree, points, rng):
    powers = monomial_table(dim, degree)
    coeffs = rng.uniform(-1.0, 1.0, powers.shape[0])
    return [
        (powers, coeffs, rng.uniform(-1.0, 1.0, dim)) for _ in range(points)
    ]


def det_inputs(size, matrices, rng):
    return [(rng.uniform(-1.0, 1.0, (size, size)),) for _ in range(matrices)]


def check_agreement(backends, poly_args, det_args):
    """The backends must agree bitwise on every benchmark input."""
    if len(backends) < 2:
        return
    (_, pj_a, det_a), (_, pj_b, det_b) = backends
    for args in poly_args[:50]:
        va, ga, ha = pj_a(*args)
        vb, gb, hb = pj_b(*args)
        assert va == vb and np.array_equal(ga, gb) and np.array_equal(ha, hb)
    for args in det_args[:50]:
        assert det_a(*args) == det_b(*args)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=4, help="polynomial variables")
    ap.add_argument("--degree", type=int, default=3, help="total degree")
    ap.add_argument("--points", type=int, default=2000, help="poly_jet calls per pass")
    ap.add_argument("--det-size", type=int, default=3, help="matrix side length")
    ap.add_argument("--matrices", type=int, default=5000, help="det calls per pass")
    ap.add_argument("--repeat", type=int, default=5, help="passes; best is kept")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    poly_args = poly_inputs(args.dim, args.degree, args.points, rng)
    det_args = det_inputs(args.det_size, args.matrices, rng)

    backends = [("python", _kernels.poly_jet_py, _kernels.det_py)]
    if _kernels.NUMBA_ACTIVE:
        backends.append(("numba", _kernels.poly_jet, _kernels.det))
        # first call pays the compile cost; keep it out of the timings
        _kernels.poly_jet(*poly_args[0])
        _kernels.det(*det_args[0])
    else:
        print("numba backend inactive (not installed or disabled); "
              "timing the pure-Python path only")

    check_agreement(backends, poly_args, det_args)

    n_terms = poly_args[0][0].shape[0]
    print(f"poly_jet: dim={args.dim} degree={args.degree} "
          f"({n_terms} terms), {args.points} calls/pass")
    print(f"det:      {args.det_size}x{args.det_size}, "
          f"{args.matrices} calls/pass, best of {args.repeat}")
    print()
    print(f"{'kernel':10s} {'backend':8s} {'us/call':>10s} {'speedup':>8s}")
    for kernel, picker, calls in (
        ("poly_jet", lambda b: b[1], poly_args),
        ("det", lambda b: b[2], det_args),
    ):
        base = None
        for backend in backends:
            per_call = best_per_call(picker(backend), calls, args.repeat)
            if base is None:
                base = per_call
            ratio = base / per_call
            print(f"{kernel:10s} {backend[0]:8s} {per_call * 1e6:10.2f} "
                  f"{ratio:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
