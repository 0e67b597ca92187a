"""Even integer lattices of small rank and the class computations on them.

Enumerations are bounded box searches; there is no reduction theory for
indefinite forms here.  Rational questions (isotropic classes of fixed
degree) are decided exactly through a discriminant square test.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .exact_algebra import Mat, Poly, normalize_scalar

LINE_GRAM = ((8, 1), (1, -2))


class LatticeError(ValueError):
    pass


class NonUnimodularWarning(UserWarning):
    pass


def _as_gram(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in r) for r in rows)


@dataclass(frozen=True)
class IntegerLattice:
    gram: tuple[tuple[int, ...], ...]
    basis_names: tuple[str, ...] = ()

    def __post_init__(self):
        gram = _as_gram(self.gram)
        n = len(gram)
        if n == 0 or any(len(r) != n for r in gram):
            raise LatticeError("gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(f"gram matrix not symmetric at ({i},{j})")
            if gram[i][i] % 2:
                raise LatticeError(f"odd diagonal entry {gram[i][i]}: lattice is not even")
        names = tuple(self.basis_names) or tuple(f"e{i}" for i in range(n))
        if len(names) != n or len(set(names)) != n:
            raise LatticeError("basis_names must be distinct and match the rank")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "basis_names", names)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def __call__(self, *coords) -> "DivisorClass":
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = tuple(coords[0])
        return DivisorClass(self, tuple(coords))

    def basis(self, name: str) -> "DivisorClass":
        i = self.basis_names.index(name)
        return self(tuple(int(i == j) for j in range(self.rank)))

    def zero(self) -> "DivisorClass":
        return self((0,) * self.rank)

    def mat(self) -> Mat:
        return Mat.from_rows(self.gram)

    def to_json(self) -> dict:
        return {"basis": list(self.basis_names), "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json(cls, obj: dict) -> "IntegerLattice":
        try:
            return cls(_as_gram(obj["gram"]), tuple(obj.get("basis", ())))
        except (KeyError, TypeError) as exc:
            raise LatticeError(f"malformed lattice object: {exc}") from exc


@dataclass(frozen=True)
class DivisorClass:
    """Coordinate vector in a lattice basis; coordinates may be rational."""

    lattice: IntegerLattice = field(repr=False)
    coords: tuple

    def __post_init__(self):
        coords = tuple(normalize_scalar(c) for c in self.coords)
        if len(coords) != self.lattice.rank:
            raise LatticeError(f"class has {len(coords)} coordinates, lattice rank is {self.lattice.rank}")
        object.__setattr__(self, "coords", coords)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coords)

    @property
    def is_primitive(self) -> bool:
        return self.is_integral and reduce(gcd, self.coords, 0) == 1

    def _check(self, other: "DivisorClass"):
        if not isinstance(other, DivisorClass) or other.lattice != self.lattice:
            raise LatticeError("classes live in different lattices")

    def __add__(self, other):
        self._check(other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return DivisorClass(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, k):
        return DivisorClass(self.lattice, tuple(a * k for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, k):
        return DivisorClass(self.lattice, tuple(Fraction(a) / k for a in self.coords))

    def dot(self, other: "DivisorClass"):
        self._check(other)
        g = self.lattice.gram
        n = len(g)
        return normalize_scalar(
            sum(self.coords[i] * g[i][j] * other.coords[j] for i in range(n) for j in range(n))
        )

    def square(self):
        return self.dot(self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        parts = []
        for c, name in zip(self.coords, self.lattice.basis_names):
            if c == 0:
                continue
            if c == 1:
                s = name
            elif c == -1:
                s = "-" + name
            else:
                s = f"{c}{name}" if isinstance(c, int) else f"({c}){name}"
            parts.append(s)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


def pair(u: DivisorClass, v: DivisorClass):
    return u.dot(v)


def discriminant(L: IntegerLattice) -> int:
    return L.mat().det()


def gram_in_basis(L: IntegerLattice, basis: Sequence[DivisorClass], *, strict: bool = False):
    """Gram matrix of ``basis``; warns (or raises when strict) if it is not a Z-basis."""
    if len(basis) != L.rank:
        raise LatticeError(f"need {L.rank} basis vectors, got {len(basis)}")
    for b in basis:
        if b.lattice != L:
            raise LatticeError("basis vector from another lattice")
        if not b.is_integral:
            raise LatticeError("basis vectors must be integral")
    change = Mat(L.rank, L.rank, [basis[j].coords[i] for i in range(L.rank) for j in range(L.rank)])
    det = change.det()
    if det not in (1, -1):
        if strict:
            raise LatticeError(f"change of basis has determinant {det}")
        warnings.warn(f"change of basis has determinant {det}; not unimodular", NonUnimodularWarning)
    return _as_gram((change.T() @ L.mat() @ change).tolist())


def _box(rank: int, height: int) -> np.ndarray:
    axes = [np.arange(-height, height + 1, dtype=np.int64)] * rank
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


def quadratic_form_poly(L: IntegerLattice, shift: int = 0) -> Poly:
    """x^T G x - shift as an integer polynomial in the coordinates."""
    names = tuple(f"x{i}" for i in range(L.rank))
    xs = [Poly.var(v, names) for v in names]
    q = Poly(names)
    for i in range(L.rank):
        for j in range(L.rank):
            if L.gram[i][j]:
                q = q + xs[i] * xs[j] * L.gram[i][j]
    return q - shift


def classes_with_square(L: IntegerLattice, n: int, height: int) -> list[DivisorClass]:
    """All classes with |coords| <= height and square n, sorted by coordinates."""
    if L.rank > 4:
        raise LatticeError("enumeration is limited to rank <= 4")
    if height < 0:
        raise LatticeError("height must be nonnegative")
    pts = _box(L.rank, height)
    mask = _kernels.zero_mask(quadratic_form_poly(L, n), pts)
    out = [L(tuple(int(x) for x in row)) for row in pts[mask]]
    out = [c for c in out if c.square() == n]  # exact re-check
    return sorted(out, key=lambda c: c.coords)


# ---------------------------------------------------------------------------
# units of Z[sigma], sigma = (1 + sqrt 17) / 2


@dataclass(frozen=True)
class QuadraticUnit:
    """x + y*sigma with sigma^2 = sigma + 4."""

    x: int
    y: int

    def norm(self) -> int:
        return self.x * self.x + self.x * self.y - 4 * self.y * self.y

    def __mul__(self, other: "QuadraticUnit") -> "QuadraticUnit":
        a, b, c, d = self.x, self.y, other.x, other.y
        # (a + b s)(c + d s) = ac + (ad + bc) s + bd (s + 4)
        return QuadraticUnit(a * c + 4 * b * d, a * d + b * c + b * d)

    def __neg__(self):
        return QuadraticUnit(-self.x, -self.y)

    def conjugate(self) -> "QuadraticUnit":
        return QuadraticUnit(self.x + self.y, -self.y)

    def inverse(self) -> "QuadraticUnit":
        nrm = self.norm()
        if nrm not in (1, -1):
            raise LatticeError(f"{self} is not a unit (norm {nrm})")
        c = self.conjugate()
        return QuadraticUnit(c.x * nrm, c.y * nrm)

    def __pow__(self, n: int) -> "QuadraticUnit":
        base = self if n >= 0 else self.inverse()
        out = QuadraticUnit(1, 0)
        for _ in range(abs(n)):
            out = out * base
        return out


FUNDAMENTAL_UNIT = QuadraticUnit(3, 2)


class ClassificationError(LatticeError):
    pass


def unit_power_classify(L: IntegerLattice, C: DivisorClass) -> tuple[int, int]:
    """(sign, n) with b - a*sigma = sign * (3 + 2 sigma)^n for C = aH + bl."""
    if L.gram != LINE_GRAM:
        raise LatticeError("unit classification needs the (H, l) lattice [[8,1],[1,-2]]")
    if C.lattice != L or not C.is_integral:
        raise LatticeError("class must be an integral class of this lattice")
    sq = C.square()
    if sq not in (2, -2):
        raise LatticeError(f"C^2 = {sq}, expected +-2")
    a, b = C.coords
    target = QuadraticUnit(b, -a)
    # coordinates of eps^n grow at least like 4^|n|
    bound = 2 * max(abs(a), abs(b), 1).bit_length() + 2
    for k in range(bound + 1):
        for n in ((k, -k) if k else (0,)):
            u = FUNDAMENTAL_UNIT**n
            if u == target:
                return 1, n
            if -u == target:
                return -1, n
    raise ClassificationError(f"{C} is not +-(3+2sigma)^n; this would contradict the unit description")


# ---------------------------------------------------------------------------
# isotropic classes of fixed degree


@dataclass(frozen=True)
class IsotropicResult:
    kind: str  # "none_rational" | "rational_only" | "integral"
    solutions: tuple  # rational coordinate tuples, descending order
    witness: Optional[DivisorClass] = None

    @property
    def integral_solutions(self) -> tuple:
        return tuple(s for s in self.solutions if all(isinstance(c, int) for c in s))


def _rational_roots(A, B, C) -> list[Fraction]:
    """Rational roots of A x^2 + B x + C (not all zero)."""
    A, B, C = Fraction(A), Fraction(B), Fraction(C)
    if A == 0:
        if B == 0:
            return []
        return [-C / B]
    disc = B * B - 4 * A * C
    if disc < 0:
        return []
    num, den = disc.numerator, disc.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return []
    r = Fraction(rn, rd)
    return sorted({(-B + r) / (2 * A), (-B - r) / (2 * A)})


def isotropic_with_degree(L: IntegerLattice, H: DivisorClass, k: int) -> IsotropicResult:
    """Decide f^2 = 0 and f.H = k over Q and over Z."""
    if H.lattice != L:
        raise LatticeError("polarization from another lattice")
    if L.rank > 2:
        raise LatticeError("isotropic search is implemented for rank <= 2")
    h2 = H.square()
    if h2 <= 0:
        raise LatticeError(f"degenerate polarization: H^2 = {h2}")
    g = L.gram
    if L.rank == 1:
        # f = x e with g x^2 = 0 forces f = 0
        sols = [(0,)] if k == 0 else []
    else:
        alpha = H.dot(L((1, 0)))
        beta = H.dot(L((0, 1)))
        sols = []
        if beta != 0:
            # y = (k - alpha x) / beta ; clear beta^2
            A = g[0][0] * beta**2 - 2 * g[0][1] * alpha * beta + g[1][1] * alpha**2
            B = 2 * g[0][1] * beta * k - 2 * g[1][1] * alpha * k
            C = g[1][1] * k * k
            for x in _rational_roots(A, B, C):
                sols.append((x, (k - alpha * x) / beta))
        else:
            A = g[1][1] * alpha**2
            B = 0
            C = g[0][0] * k * k
            # x = k / alpha fixed; quadratic in y: g11 y^2 alpha^2 + 2 g01 k y alpha + g00 k^2
            B = 2 * g[0][1] * k * alpha
            for y in _rational_roots(A, B, C):
                sols.append((Fraction(k, alpha), y))
    sols = [tuple(normalize_scalar(c) for c in s) for s in sols]
    sols = [s for s in sols if L(s).square() == 0 and L(s).dot(H) == k]
    sols = sorted(set(sols), reverse=True)
    integral = [s for s in sols if all(isinstance(c, int) for c in s)]
    if integral:
        return IsotropicResult("integral", tuple(sols), L(integral[0]))
    if sols:
        return IsotropicResult("rational_only", tuple(sols))
    return IsotropicResult("none_rational", ())


# ---------------------------------------------------------------------------
# rank-2 cones


def _primitive(coords) -> tuple[int, ...]:
    g = reduce(gcd, coords, 0)
    return tuple(c // g for c in coords) if g else tuple(coords)


def orthogonal_ray(L: IntegerLattice, C: DivisorClass, reference: DivisorClass | None = None) -> DivisorClass:
    """Primitive generator of C-perp, oriented positively against ``reference``.

    When the reference pairs to zero with C-perp the first nonzero coordinate
    is made positive instead.
    """
    if L.rank != 2:
        raise LatticeError("orthogonal_ray needs a rank-2 lattice")
    if C.is_zero():
        raise LatticeError("C must be nonzero")
    u0 = C.dot(L((1, 0)))
    u1 = C.dot(L((0, 1)))
    if u0 == 0 and u1 == 0:
        raise LatticeError("C is in the radical of the form")
    ray = _primitive((u1, -u0))
    sign = 0
    if reference is not None:
        p = L(ray).dot(reference)
        sign = (p > 0) - (p < 0)
    if sign == 0:
        first = next(c for c in ray if c)
        sign = 1 if first > 0 else -1
    return L(tuple(sign * c for c in ray))


def _cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class ConeRays:
    rays: tuple  # DivisorClass, sorted by coordinates
    note: str = ""
    candidates: int = 0


def effective_cone_rays(L: IntegerLattice, H: DivisorClass, height: int) -> ConeRays:
    """Extremal rays of the cone spanned by (-2)-classes C with C.H > 0 in the box."""
    if L.rank != 2:
        raise LatticeError("cone computations are implemented for rank 2")
    if H.square() <= 0:
        raise LatticeError("polarization must have positive square")
    cands = [c for c in classes_with_square(L, -2, height) if c.dot(H) > 0]
    if not cands:
        return ConeRays((), f"no -2 curves within height {height}")
    lo = hi = cands[0].coords
    for c in cands[1:]:
        if _cross(c.coords, lo) > 0:
            lo = c.coords
        if _cross(hi, c.coords) > 0:
            hi = c.coords
    rays = sorted({lo, hi})
    return ConeRays(tuple(L(r) for r in rays), "", len(cands))


def nef_cone_rays(L: IntegerLattice, H: DivisorClass, height: int) -> ConeRays:
    """Boundary of the closed ample cone: rays orthogonal to the extremal (-2)-curves."""
    eff = effective_cone_rays(L, H, height)
    if not eff.rays:
        return ConeRays((), eff.note)
    rays = sorted({orthogonal_ray(L, r, H).coords for r in eff.rays})
    return ConeRays(tuple(L(r) for r in rays), eff.note, eff.candidates)


def check_involution(L: IntegerLattice, m) -> bool:
    """True iff m (acting on coordinate columns) is an isometry with m^2 = 1."""
    m = Mat.from_rows(m) if not isinstance(m, Mat) else m
    if (m.rows, m.cols) != (L.rank, L.rank):
        return False
    G = L.mat()
    return m.T() @ G @ m == G and m @ m == Mat.identity(L.rank)


def apply_matrix(m, C: DivisorClass) -> DivisorClass:
    m = Mat.from_rows(m) if not isinstance(m, Mat) else m
    return C.lattice(m.apply(C.coords))


def theta_count(g: int) -> int:
    """Even theta-characteristics on a genus-g curve: 2^(g-1) (2^g + 1)."""
    if g < 1:
        raise LatticeError("genus must be positive")
    return 2 ** (g - 1) * (2**g + 1)


def unimodular_changes(rank: int, height: int):
    """Integer matrices with entries in [-height, height] and determinant +-1."""
    for entries in itertools.product(range(-height, height + 1), repeat=rank * rank):
        m = Mat(rank, rank, entries)
        if m.det() in (1, -1):
            yield m
