#!/usr/bin/env python3
"""Time the numba and numpy kernels on the two hot loops.

    python3 benchmarks/bench_kernels.py

Workloads: the singular-point scan of a sextic over P^2(F_p), and the
integer box search for classes of square -2.  Both backends must return the
same answer; the script aborts otherwise.
"""
import argparse
import time

import numpy as np

from k3mukai import _kernels
from k3mukai.exact_algebra import Poly
from k3mukai.lattice import LINE_GRAM, IntegerLattice, _box, quadratic_form_poly

YV = ("y0", "y1", "y2")


def six_lines():
    y0, y1, y2 = (Poly.var(v, YV) for v in YV)
    C = y0 * y1 * y2 * (y0 + y1) * (y0 + y2) * (y1 + y2)
    return [C] + [C.diff(v) for v in YV]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--prime", type=int, default=211)
    ap.add_argument("--height", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = [_kernels.numpy_impl]
    if _kernels.numba_impl is not None:
        impls.append(_kernels.numba_impl)
    else:
        print("numba unavailable (or disabled by K3MUKAI_NO_NUMBA); timing numpy only")

    polys = six_lines()
    L = IntegerLattice(LINE_GRAM, ("H", "l"))
    q = quadratic_form_poly(L, -2)
    pts = _box(2, args.height)

    for impl in impls:  # warm up the JIT outside the timings
        _kernels.projective_zeros_mod_p(polys, 5, impl)
        _kernels.zero_mask(q, pts[:10], impl)

    print(f"{'workload':<34} {'backend':<7} {'seconds':>9}")
    results = {}
    for impl in impls:
        t, out = best_of(lambda: _kernels.projective_zeros_mod_p(polys, args.prime, impl), args.repeat)
        results.setdefault("fp", []).append(out)
        print(f"{'sextic singular points mod ' + str(args.prime):<34} {impl.name:<7} {t:9.4f}")
        t, out = best_of(lambda: _kernels.zero_mask(q, pts, impl), args.repeat)
        results.setdefault("box", []).append(out)
        print(f"{'(-2)-classes in box ' + str(args.height):<34} {impl.name:<7} {t:9.4f}")

    for key, outs in results.items():
        for other in outs[1:]:
            same = np.array_equal(outs[0], other) if isinstance(other, np.ndarray) else outs[0] == other
            if not same:
                raise SystemExit(f"backends disagree on {key}")
    print("backends agree")


if __name__ == "__main__":
    main()
