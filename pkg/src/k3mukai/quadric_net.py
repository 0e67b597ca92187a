"""Nets of quadrics in P^5 as symmetric 6x6 matrices of linear forms in y0, y1, y2.

The discriminant curve det(y0 N0 + y1 N1 + y2 N2) = 0 is a plane sextic.  This
module computes it, restricts it to lines and pencils, certifies tritangent
lines by a square test, and scans for singular points at small height and over
small prime fields.  Smoothness is never asserted, only evidenced.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .exact_algebra import (
    BinaryForm,
    Mat,
    Poly,
    binary_form_is_square,
    normalize_scalar,
    poly_det,
)

YVARS = ("y0", "y1", "y2")
DEFAULT_PRIMES = (5, 7, 11, 13)
# a reduced plane sextic has at most 6*5/2 singular points
MAX_SINGULAR_REDUCED = 15


class NetError(ValueError):
    pass


class LineComponentError(NetError):
    """The line is a component of the curve, so restriction carries no information."""


def _check_square_int(m, n: int, name: str):
    rows = [list(r) for r in m]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise NetError(f"{name} must be {n}x{n}")
    try:
        rows = [[int(x) for x in r] for r in rows]
    except (TypeError, ValueError) as exc:
        raise NetError(f"{name} must have integer entries") from exc
    for i in range(n):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise NetError(f"{name} is not symmetric at ({i},{j})")
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class LinearFormMatrix:
    """Q(y) = y0*N0 + y1*N1 + y2*N2 with symmetric integer Ni."""

    N0: tuple
    N1: tuple
    N2: tuple

    def __post_init__(self):
        n = len(self.N0)
        for name in ("N0", "N1", "N2"):
            object.__setattr__(self, name, _check_square_int(getattr(self, name), n, name))

    @property
    def size(self) -> int:
        return len(self.N0)

    @property
    def coeffs(self) -> tuple:
        return (self.N0, self.N1, self.N2)

    @classmethod
    def from_poly_matrix(cls, m: Sequence[Sequence[Poly]]) -> "LinearFormMatrix":
        n = len(m)
        Ns = [[[0] * n for _ in range(n)] for _ in range(3)]
        for i in range(n):
            for j in range(n):
                e = _as_linear(m[i][j])
                for k in range(3):
                    Ns[k][i][j] = e.coeff(tuple(int(t == k) for t in range(3)))
        return cls(*Ns)

    def matrix(self) -> Mat:
        n = self.size
        ys = [Poly.var(v, YVARS) for v in YVARS]
        entries = []
        for i in range(n):
            for j in range(n):
                e = Poly(YVARS)
                for k in range(3):
                    if self.coeffs[k][i][j]:
                        e = e + ys[k] * self.coeffs[k][i][j]
                entries.append(e)
        return Mat(n, n, entries)

    def at(self, point: Sequence) -> Mat:
        p = [normalize_scalar(x) for x in point]
        n = self.size
        return Mat(
            n,
            n,
            [sum(p[k] * self.coeffs[k][i][j] for k in range(3)) for i in range(n) for j in range(n)],
        )

    def congruence(self, G) -> "LinearFormMatrix":
        """G^T Q G for a constant integer matrix G."""
        G = G if isinstance(G, Mat) else Mat.from_rows(G)
        out = []
        for N in self.coeffs:
            out.append((G.T() @ Mat.from_rows(N) @ G).tolist())
        return LinearFormMatrix(*out)

    def substitute(self, M) -> "LinearFormMatrix":
        """Linear change of net parameters y -> M y (M 3x3 integer)."""
        M = M if isinstance(M, Mat) else Mat.from_rows(M)
        n = self.size
        out = [[[0] * n for _ in range(n)] for _ in range(3)]
        # sum_k y'_k N'_k where (My)_j = sum_k M[j][k] y_k
        for k in range(3):
            for i in range(n):
                for j in range(n):
                    out[k][i][j] = sum(M[jj, k] * self.coeffs[jj][i][j] for jj in range(3))
        return LinearFormMatrix(*out)

    def to_json(self) -> dict:
        return {"N0": [list(r) for r in self.N0], "N1": [list(r) for r in self.N1], "N2": [list(r) for r in self.N2]}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearFormMatrix":
        try:
            return cls(obj["N0"], obj["N1"], obj["N2"])
        except KeyError as exc:
            raise NetError(f"net is missing {exc}") from exc


def load_net(path) -> LinearFormMatrix:
    with open(Path(path)) as fh:
        return LinearFormMatrix.from_json(json.load(fh))


def _as_linear(e) -> Poly:
    """Accept a linear Poly over y0,y1,y2, an integer (times nothing: must be 0), or a triple."""
    if isinstance(e, Poly):
        if e.vars != YVARS:
            raise NetError(f"entry over {e.vars}, expected {YVARS}")
        if not e.is_zero() and (e.degree() != 1 or not e.is_homogeneous()):
            raise NetError(f"entry {e} is not a linear form")
        return e
    if isinstance(e, (tuple, list)) and len(e) == 3:
        return Poly.linear(e, YVARS)
    if e == 0:
        return Poly(YVARS)
    raise NetError(f"cannot read {e!r} as a linear form")


@dataclass(frozen=True)
class PlaneSextic:
    poly: Poly
    degenerate: bool = field(default=False)

    def __post_init__(self):
        p = self.poly
        if p.vars != YVARS:
            raise NetError("plane curve must be over y0, y1, y2")
        if not p.is_zero() and not p.is_homogeneous():
            raise NetError("plane curve equation is not homogeneous")
        object.__setattr__(self, "degenerate", p.is_zero() or p.degree() != 6)

    def partials(self) -> list[Poly]:
        return [self.poly.diff(v) for v in YVARS]

    def __str__(self):
        return str(self.poly)


def det_sextic(N: LinearFormMatrix) -> PlaneSextic:
    return PlaneSextic(poly_det(N.matrix()))


def rank_at(N: LinearFormMatrix, p: Sequence) -> int:
    if not any(p):
        raise NetError("(0,0,0) is not a point of P^2")
    return N.at(p).rank()


def build_conic_block_net(A, D) -> LinearFormMatrix:
    """[[y0*I3, A], [A^T, D]] for 3x3 matrices of linear forms A and symmetric D."""
    A = [[_as_linear(x) for x in row] for row in A]
    D = [[_as_linear(x) for x in row] for row in D]
    if len(A) != 3 or len(D) != 3 or any(len(r) != 3 for r in A + D):
        raise NetError("A and D must be 3x3")
    for i in range(3):
        for j in range(i):
            if D[i][j] != D[j][i]:
                raise NetError(f"D is not symmetric at ({i},{j})")
    y0 = Poly.var("y0", YVARS)
    zero = Poly(YVARS)
    m = [[y0 if i == j else zero for j in range(3)] + list(A[i]) for i in range(3)]
    m += [[A[j][i] for j in range(3)] + list(D[i]) for i in range(3)]
    return LinearFormMatrix.from_poly_matrix(m)


def line_parametrization(line: Sequence[int]) -> list[Poly]:
    """y_i as binary forms in (u, v) parametrizing the line sum lambda_i y_i = 0.

    The pivot is the first nonzero coefficient; the other two coordinates
    (in index order) are the parameters, scaled by the pivot coefficient.
    """
    lam = [int(x) for x in line]
    if len(lam) != 3 or not any(lam):
        raise NetError("a line needs three coefficients, not all zero")
    uv = ("u", "v")
    p = next(i for i, c in enumerate(lam) if c)
    free = [i for i in range(3) if i != p]
    ys: list[Poly] = [Poly(uv)] * 3
    ys[free[0]] = Poly.var("u", uv) * lam[p]
    ys[free[1]] = Poly.var("v", uv) * lam[p]
    ys[p] = -(Poly.var("u", uv) * lam[free[0]] + Poly.var("v", uv) * lam[free[1]])
    return ys


def restrict_to_line(C: PlaneSextic, line: Sequence[int]) -> BinaryForm:
    """Binary form of C on the line; the zero form means the line lies on C."""
    ys = line_parametrization(line)
    q = C.poly.subs(dict(zip(YVARS, ys)), vars=("u", "v"))
    d = C.poly.degree() if not C.poly.is_zero() else 6
    return BinaryForm.from_poly(q, d)


def square_up_to_scalar(f: BinaryForm) -> Optional[BinaryForm]:
    """g with f = c * g^2 for a nonzero rational c, normalized so that c = lc(f)."""
    if f.is_zero():
        return None
    lc = f.leading_coefficient()
    return binary_form_is_square(f * (Fraction(1) / lc))


def tritangent_certificate(C: PlaneSextic, line: Sequence[int]) -> bool:
    """True iff C meets the line with even multiplicity everywhere.

    The restriction is only defined up to a scalar (the parametrization and
    the equation of C both are), so the test asks for a square up to a
    constant.
    """
    f = restrict_to_line(C, line)
    if f.is_zero():
        raise LineComponentError(f"line {tuple(line)} is a component of the curve")
    return square_up_to_scalar(f) is not None


@dataclass(frozen=True)
class PencilBranch:
    form: BinaryForm
    multiplicities: tuple

    @property
    def distinct_roots(self) -> int:
        return len(self.multiplicities)

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) for c in self.form.coeffs],
            "multiplicities": list(self.multiplicities),
        }


def pencil_branch_form(N: LinearFormMatrix, p: Sequence, q: Sequence) -> PencilBranch:
    """det(s N(p) + t N(q)) as a binary form in (s, t) with its root multiplicities."""
    if len(p) != 3 or len(q) != 3 or Mat.from_rows([list(p), list(q)]).rank() < 2:
        raise NetError("pencil needs two distinct points of P^2")
    st = ("s", "t")
    s, t = Poly.var("s", st), Poly.var("t", st)
    Np, Nq = N.at(p), N.at(q)
    n = N.size
    m = Mat(n, n, [s * Np[i, j] + t * Nq[i, j] for i in range(n) for j in range(n)])
    det = poly_det(m)
    form = BinaryForm.from_poly(det, n)
    mults = form.root_multiplicities() if not form.is_zero() else ()
    return PencilBranch(form, mults)


# ---------------------------------------------------------------------------
# singular points


def primitive_points(height: int) -> np.ndarray:
    """Primitive integer triples with |y_i| <= height, first nonzero coordinate positive."""
    if height < 1:
        return np.zeros((0, 3), dtype=np.int64)
    rng = range(-height, height + 1)
    pts = []
    for y in itertools.product(rng, repeat=3):
        if not any(y) or reduce(gcd, y, 0) != 1:
            continue
        if next(c for c in y if c) < 0:
            continue
        pts.append(y)
    pts.sort()
    return np.array(pts, dtype=np.int64).reshape(-1, 3)


@dataclass(frozen=True)
class SingularScan:
    points: tuple  # rational (integer primitive) singular points
    height: int
    fp_counts: dict  # prime -> number of singular points in P^2(F_p)
    reduced: Optional[bool]  # True: certified reduced; False: certified non-reduced; None: unknown
    note: str = ""

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "points": [list(p) for p in self.points],
            "count": len(self.points),
            "fp_counts": {str(k): v for k, v in sorted(self.fp_counts.items())},
            "reduced": self.reduced,
            "note": self.note,
        }


_PROBE_LINES = ((1, 2, 3), (2, -3, 5), (7, 1, -4), (3, 5, 11))


def _reducedness(C: PlaneSextic) -> Optional[bool]:
    """A nonzero squarefree restriction to some line certifies that C is reduced."""
    for line in _PROBE_LINES:
        f = restrict_to_line(C, line)
        if not f.is_zero() and f.degree > 0 and f.is_squarefree():
            return True
    return None


def singular_point_scan(
    C: PlaneSextic, height: int, primes: Sequence[int] = DEFAULT_PRIMES
) -> SingularScan:
    if C.poly.is_zero():
        raise NetError("the zero polynomial does not define a curve")
    polys = [C.poly] + C.partials()
    pts = primitive_points(height)
    mask = np.ones(pts.shape[0], dtype=np.bool_)
    for q in polys:
        if not mask.any():
            break
        sub = np.nonzero(mask)[0]
        mask[sub] = _kernels.zero_mask(q, pts[sub])
    found = [tuple(int(x) for x in r) for r in pts[mask]]
    # kernel hits are re-checked exactly
    found = tuple(sorted(p for p in found if all(q.evaluate(p) == 0 for q in polys)))
    fp = {int(p): len(_kernels.projective_zeros_mod_p(polys, int(p))) for p in primes}
    reduced = _reducedness(C)
    note = ""
    if len(found) > MAX_SINGULAR_REDUCED:
        reduced = False
        note = f"{len(found)} singular points exceed {MAX_SINGULAR_REDUCED}: curve is non-reduced"
    elif reduced is None:
        note = "every probe line meets the curve non-transversally; possibly non-reduced"
    if not found:
        note = (note + "; " if note else "") + "no singular point found within the search budget (evidence, not proof)"
    return SingularScan(found, height, fp, reduced, note)


# ---------------------------------------------------------------------------
# random nets for property tests


def _rand_sym(rng: random.Random, n: int, lo: int, hi: int):
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = rng.randint(lo, hi)
    return m


def random_net(rng: random.Random, lo: int = -3, hi: int = 3, n: int = 6) -> LinearFormMatrix:
    return LinearFormMatrix(*[_rand_sym(rng, n, lo, hi) for _ in range(3)])


def random_conic_block_net(rng: random.Random, lo: int = -3, hi: int = 3) -> LinearFormMatrix:
    A = [[tuple(rng.randint(lo, hi) for _ in range(3)) for _ in range(3)] for _ in range(3)]
    Ds = [_rand_sym(rng, 3, lo, hi) for _ in range(3)]
    D = [[tuple(Ds[k][i][j] for k in range(3)) for j in range(3)] for i in range(3)]
    return build_conic_block_net(A, D)
