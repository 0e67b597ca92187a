"""Integer search kernels: batched polynomial evaluation and F_p zero scans.

Two interchangeable implementations live here, a numba ``@njit`` one and a
vectorized numpy one.  ``K3MUKAI_NO_NUMBA=1`` (or a missing numba) selects
numpy.  Kernels work in int64, so callers only hand them inputs whose value
bound fits (see :func:`int64_safe`); every hit is re-verified in exact
arithmetic by the caller anyway.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

INT64_LIMIT = 1 << 62
MAX_PRIME = 1 << 31


def _flag_disabled() -> bool:
    return os.environ.get("K3MUKAI_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# numpy path


def _np_eval_int(exps, coeffs, pts):
    out = np.zeros(pts.shape[0], dtype=np.int64)
    for t in range(exps.shape[0]):
        term = np.full(pts.shape[0], coeffs[t], dtype=np.int64)
        for v in range(exps.shape[1]):
            for _ in range(exps[t, v]):
                term = term * pts[:, v]
        out += term
    return out


def _np_powmod_rows(x, e, p):
    r = np.ones_like(x)
    for _ in range(e):
        r = (r * x) % p
    return r


def _np_all_vanish_mod_p(exps, coeffs, offsets, pts, p):
    keep = np.ones(pts.shape[0], dtype=np.bool_)
    for k in range(offsets.shape[0] - 1):
        acc = np.zeros(pts.shape[0], dtype=np.int64)
        for t in range(offsets[k], offsets[k + 1]):
            term = np.full(pts.shape[0], coeffs[t] % p, dtype=np.int64)
            for v in range(exps.shape[1]):
                if exps[t, v]:
                    term = (term * _np_powmod_rows(pts[:, v], exps[t, v], p)) % p
            acc = (acc + term) % p
        keep &= acc == 0
    return keep


def _projective_reps(p, start, stop):
    """Rows start..stop-1 of the canonical list of P^2(F_p) representatives."""
    idx = np.arange(start, stop, dtype=np.int64)
    pts = np.zeros((idx.shape[0], 3), dtype=np.int64)
    big = idx < p * p
    pts[big, 0] = 1
    pts[big, 1] = idx[big] // p
    pts[big, 2] = idx[big] % p
    mid = (~big) & (idx < p * p + p)
    pts[mid, 1] = 1
    pts[mid, 2] = idx[mid] - p * p
    last = idx == p * p + p
    pts[last, 2] = 1
    return pts


def _np_projective_zeros_mod_p(exps, coeffs, offsets, p, chunk=1 << 18):
    total = p * p + p + 1
    found = []
    for start in range(0, total, chunk):
        pts = _projective_reps(p, start, min(total, start + chunk))
        found.append(pts[_np_all_vanish_mod_p(exps, coeffs, offsets, pts, p)])
    return np.concatenate(found) if found else np.zeros((0, 3), dtype=np.int64)


numpy_impl = SimpleNamespace(
    name="numpy",
    eval_int=_np_eval_int,
    projective_zeros_mod_p=_np_projective_zeros_mod_p,
)


# ---------------------------------------------------------------------------
# numba path

numba_impl = None
if not _flag_disabled():
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - depends on environment
        njit = None

    if njit is not None:

        @njit(cache=True)
        def _nb_eval_int(exps, coeffs, pts):
            n = pts.shape[0]
            out = np.zeros(n, dtype=np.int64)
            for i in range(n):
                acc = 0
                for t in range(exps.shape[0]):
                    term = coeffs[t]
                    for v in range(exps.shape[1]):
                        for _ in range(exps[t, v]):
                            term *= pts[i, v]
                    acc += term
                out[i] = acc
            return out

        @njit(cache=True)
        def _nb_vanish_at(exps, coeffs, offsets, x0, x1, x2, p):
            for k in range(offsets.shape[0] - 1):
                acc = 0
                for t in range(offsets[k], offsets[k + 1]):
                    term = coeffs[t] % p
                    e0, e1, e2 = exps[t, 0], exps[t, 1], exps[t, 2]
                    for _ in range(e0):
                        term = (term * x0) % p
                    for _ in range(e1):
                        term = (term * x1) % p
                    for _ in range(e2):
                        term = (term * x2) % p
                    acc = (acc + term) % p
                if acc != 0:
                    return False
            return True

        @njit(cache=True)
        def _nb_projective_zeros_mod_p(exps, coeffs, offsets, p):
            total = p * p + p + 1
            out = np.zeros((total, 3), dtype=np.int64)
            m = 0
            for y in range(p):
                for z in range(p):
                    if _nb_vanish_at(exps, coeffs, offsets, 1, y, z, p):
                        out[m, 0] = 1
                        out[m, 1] = y
                        out[m, 2] = z
                        m += 1
            for z in range(p):
                if _nb_vanish_at(exps, coeffs, offsets, 0, 1, z, p):
                    out[m, 1] = 1
                    out[m, 2] = z
                    m += 1
            if _nb_vanish_at(exps, coeffs, offsets, 0, 0, 1, p):
                out[m, 2] = 1
                m += 1
            return out[:m].copy()

        numba_impl = SimpleNamespace(
            name="numba",
            eval_int=_nb_eval_int,
            projective_zeros_mod_p=_nb_projective_zeros_mod_p,
        )

backend = numba_impl if numba_impl is not None else numpy_impl
BACKEND = backend.name


# ---------------------------------------------------------------------------
# helpers shared by both paths


def int64_safe(coeffs, degrees, bound) -> bool:
    """True when sum |c| * bound^deg stays below 2^62 (no int64 overflow)."""
    total = sum(abs(int(c)) * int(bound) ** int(d) for c, d in zip(coeffs, degrees))
    return total < INT64_LIMIT


def pack_terms(polys):
    """Flatten integer polynomials into (exps, coeffs, offsets) arrays."""
    exps, coeffs, offsets = [], [], [0]
    nv = len(polys[0].vars)
    for p in polys:
        if len(p.vars) != nv:
            raise ValueError("polynomials over different variable counts")
        for e, c in p.terms.items():
            if not isinstance(c, int):
                raise ValueError("kernel polynomials need integer coefficients")
            exps.append(e)
            coeffs.append(c)
        offsets.append(len(coeffs))
    return (
        np.asarray(exps, dtype=np.int64).reshape(-1, nv),
        np.asarray(coeffs, dtype=np.int64),
        np.asarray(offsets, dtype=np.int64),
    )


def zero_mask(poly, pts: np.ndarray, impl=None) -> np.ndarray:
    """Boolean mask of rows of ``pts`` where the integer polynomial vanishes.

    Uses the int64 kernel when the value bound allows it, otherwise evaluates
    with Python integers.  Either way the result is exact.
    """
    impl = impl or backend
    pts = np.asarray(pts, dtype=np.int64)
    if pts.shape[0] == 0 or poly.is_zero():
        return np.full(pts.shape[0], poly.is_zero(), dtype=np.bool_)
    bound = max(int(np.abs(pts).max()), 1)
    if poly.is_integral() and int64_safe(poly.terms.values(), map(sum, poly.terms), bound):
        exps, coeffs, _ = pack_terms([poly])
        return impl.eval_int(exps, coeffs, pts) == 0
    rows = pts.tolist()
    return np.array([poly.evaluate(r) == 0 for r in rows], dtype=np.bool_)


def projective_zeros_mod_p(polys, p: int, impl=None) -> list[tuple[int, int, int]]:
    """Points of P^2(F_p) (normalized representatives) where all polys vanish."""
    impl = impl or backend
    if not 2 <= p < MAX_PRIME:
        raise ValueError(f"prime {p} out of kernel range")
    polys = [q for q in polys if not q.is_zero()]
    if not polys:
        return [tuple(int(x) for x in r) for r in _projective_reps(p, 0, p * p + p + 1)]
    exps, coeffs, offsets = pack_terms(polys)
    coeffs = coeffs % p
    hits = impl.projective_zeros_mod_p(exps, coeffs, offsets, np.int64(p))
    return sorted(tuple(int(x) for x in r) for r in hits)
