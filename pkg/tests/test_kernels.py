import os
import subprocess
import sys

import numpy as np
import pytest

from k3mukai import _kernels
from k3mukai.exact_algebra import Poly

YV = ("y0", "y1", "y2")
y0, y1, y2 = (Poly.var(v, YV) for v in YV)

impls = [_kernels.numpy_impl] + ([_kernels.numba_impl] if _kernels.numba_impl is not None else [])


def brute_fp(polys, p):
    out = []
    for pt in _kernels._projective_reps(p, 0, p * p + p + 1).tolist():
        if all(q.evaluate(pt) % p == 0 for q in polys):
            out.append(tuple(pt))
    return sorted(out)


@pytest.mark.parametrize("impl", impls, ids=lambda i: i.name)
def test_fp_scan_matches_brute_force(impl):
    C = y0 * y1 * y2 * (y0 + y1) * (y0 + y2) * (y1 + y2)
    polys = [C] + [C.diff(v) for v in YV]
    for p in (2, 3, 5, 7):
        assert _kernels.projective_zeros_mod_p(polys, p, impl) == brute_fp(polys, p)


@pytest.mark.parametrize("impl", impls, ids=lambda i: i.name)
def test_zero_mask_matches_exact(impl):
    q = y0 * y0 * 8 + y0 * y1 * 2 - y1 * y1 * 2 + 2 + y2 * 0
    rng = np.random.default_rng(0)
    pts = rng.integers(-50, 50, size=(500, 3))
    pts[:5] = [[0, 1, 0], [0, -1, 7], [16, -25, 0], [1, 2, 3], [0, 0, 0]]
    mask = _kernels.zero_mask(q, pts, impl)
    assert list(mask) == [q.evaluate(r) == 0 for r in pts.tolist()]


def test_backends_agree():
    if _kernels.numba_impl is None:
        pytest.skip("numba not available")
    C = y0**6 + y1**6 - y2**6 + y0 * y1 * y2**4 * 3
    polys = [C] + [C.diff(v) for v in YV]
    for p in (11, 13, 31):
        assert _kernels.projective_zeros_mod_p(polys, p, _kernels.numpy_impl) == _kernels.projective_zeros_mod_p(
            polys, p, _kernels.numba_impl
        )


def test_overflow_falls_back_to_python():
    big = y0**6 * (10**12)
    pts = np.array([[10**3, 0, 0], [0, 1, 0]], dtype=np.int64)
    assert list(_kernels.zero_mask(big, pts)) == [False, True]
    assert not _kernels.int64_safe([10**12], [6], 10**3)


def test_fp_scan_range_check():
    with pytest.raises(ValueError):
        _kernels.projective_zeros_mod_p([y0], 1)


def test_zero_polys_give_every_point():
    assert len(_kernels.projective_zeros_mod_p([Poly(YV)], 3)) == 13


def test_env_flag_selects_numpy():
    env = dict(os.environ, K3MUKAI_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from k3mukai import _kernels; print(_kernels.BACKEND, _kernels.numba_impl)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.split() == ["numpy", "None"]
