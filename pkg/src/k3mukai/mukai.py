"""Mukai vectors (r, c1, s) over a Picard lattice and the numeric moduli certificates."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional

from .exact_algebra import Poly, normalize_scalar
from .lattice import (
    DivisorClass,
    IntegerLattice,
    LatticeError,
    isotropic_with_degree,
)


class MukaiError(ValueError):
    pass


@dataclass(frozen=True)
class MukaiVector:
    r: object
    c1: DivisorClass
    s: object

    def __post_init__(self):
        if not isinstance(self.c1, DivisorClass):
            raise MukaiError("c1 must be a DivisorClass")
        object.__setattr__(self, "r", normalize_scalar(self.r))
        object.__setattr__(self, "s", normalize_scalar(self.s))

    @property
    def lattice(self) -> IntegerLattice:
        return self.c1.lattice

    def coords(self) -> tuple:
        """(r, c1 coordinates..., s): the algebraic Mukai lattice coordinates."""
        return (self.r, *self.c1.coords, self.s)

    @classmethod
    def from_coords(cls, L: IntegerLattice, coords) -> "MukaiVector":
        coords = tuple(coords)
        if len(coords) != L.rank + 2:
            raise MukaiError(f"expected {L.rank + 2} coordinates, got {len(coords)}")
        return cls(coords[0], L(coords[1:-1]), coords[-1])

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r + other.r, self.c1 + other.c1, self.s + other.s)

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r - other.r, self.c1 - other.c1, self.s - other.s)

    def __neg__(self):
        return MukaiVector(-self.r, -self.c1, -self.s)

    def __mul__(self, k):
        return MukaiVector(self.r * k, self.c1 * k, self.s * k)

    __rmul__ = __mul__

    def __str__(self):
        return f"({self.r}, {self.c1}, {self.s})"

    def to_json(self) -> dict:
        def enc(x):
            return x if isinstance(x, int) else str(x)

        return {"r": enc(self.r), "c1": [enc(c) for c in self.c1.coords], "s": enc(self.s)}

    @classmethod
    def from_json(cls, L: IntegerLattice, obj: dict) -> "MukaiVector":
        try:
            return cls(Fraction(obj["r"]), L([Fraction(c) for c in obj["c1"]]), Fraction(obj["s"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MukaiError(f"malformed Mukai vector: {exc}") from exc


def from_chern(r: int, c1: DivisorClass, c2: int) -> MukaiVector:
    if r < 0:
        raise MukaiError("rank must be nonnegative")
    sq = c1.square()
    if sq % 2:
        raise MukaiError(f"c1^2 = {sq} is odd")
    return MukaiVector(r, c1, r + sq // 2 - c2)


def to_chern(v: MukaiVector) -> tuple:
    """(r, c1, c2) with c2 = c1^2/2 + r - s."""
    return v.r, v.c1, normalize_scalar(Fraction(v.c1.square()) / 2 + v.r - v.s)


def mukai_pair(a: MukaiVector, b: MukaiVector):
    if a.lattice != b.lattice:
        raise LatticeError("Mukai vectors over different lattices")
    return normalize_scalar(a.c1.dot(b.c1) - a.r * b.s - a.s * b.r)


def is_isotropic(v: MukaiVector) -> bool:
    return mukai_pair(v, v) == 0


def is_primitive(v: MukaiVector) -> bool:
    cs = v.coords()
    if not all(isinstance(c, int) for c in cs):
        return False
    return reduce(gcd, cs, 0) == 1


def twist(v: MukaiVector, lam: DivisorClass) -> MukaiVector:
    """Multiply by ch(L) for c1(L) = lam."""
    return MukaiVector(
        v.r,
        v.c1 + lam * v.r,
        v.s + v.c1.dot(lam) + Fraction(v.r) * lam.square() / 2,
    )


def _solve_integral(L: IntegerLattice, c_diff: DivisorClass, r: int) -> Optional[DivisorClass]:
    if not all(isinstance(c, int) and c % r == 0 for c in c_diff.coords):
        return None
    return L(tuple(c // r for c in c_diff.coords))


def twist_equivalent(v: MukaiVector, w: MukaiVector, *, allow_rational: bool = False) -> Optional[DivisorClass]:
    """A class lam with twist(v, lam) == w, or None.

    For r != 0 the class is forced: lam = (w.c1 - v.c1)/r.  For r == 0 the
    twist only shifts s by c1.lam, so we look for the lam of smallest norm
    along a gcd decomposition.
    """
    if v.lattice != w.lattice or v.r != w.r:
        return None
    L = v.lattice
    if v.r != 0:
        diff = w.c1 - v.c1
        if allow_rational:
            lam = diff / v.r
        else:
            if not isinstance(v.r, int):
                return None
            lam = _solve_integral(L, diff, abs(v.r))
            if lam is None:
                return None
            if v.r < 0:
                lam = -lam
        return lam if twist(v, lam) == w else None
    # rank zero: c1 unchanged, s shifts by c1.lam
    if v.c1 != w.c1:
        return None
    need = w.s - v.s
    if need == 0:
        return L.zero()
    pairings = [v.c1.dot(L.basis(n)) for n in L.basis_names]
    if not all(isinstance(p, int) for p in pairings) or not isinstance(need, int):
        return None
    g, coefs = _ext_gcd_list(pairings)
    if g == 0 or need % g:
        return None
    lam = L(tuple(c * (need // g) for c in coefs))
    return lam if twist(v, lam) == w else None


def _ext_gcd_list(values):
    """(g, coefficients) with sum coef_i * values_i = g = gcd(values) >= 0."""
    g, coefs = 0, [0] * len(values)
    for i, a in enumerate(values):
        # combine g with a
        x0, x1, r0, r1 = 1, 0, g, a
        y0, y1 = 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        if r0 < 0:
            r0, x0, y0 = -r0, -x0, -y0
        coefs = [c * x0 for c in coefs]
        coefs[i] = y0
        g = r0
    return g, coefs


def algebraic_generators(L: IntegerLattice) -> list[MukaiVector]:
    """(1,0,0), (0,e_i,0), (0,0,1)."""
    gens = [MukaiVector(1, L.zero(), 0)]
    gens += [MukaiVector(0, L.basis(n), 0) for n in L.basis_names]
    gens.append(MukaiVector(0, L.zero(), 1))
    return gens


def sigma_min(L: IntegerLattice, v: MukaiVector) -> int:
    if v.lattice != L:
        raise LatticeError("vector over a different lattice")
    vals = [mukai_pair(v, e) for e in algebraic_generators(L)]
    if not all(isinstance(x, int) for x in vals):
        raise MukaiError("sigma_min needs an integral Mukai vector")
    return reduce(gcd, vals, 0)


def mukai_gram(L: IntegerLattice) -> tuple:
    """Gram matrix of the algebraic Mukai lattice in the generator basis."""
    gens = algebraic_generators(L)
    return tuple(tuple(mukai_pair(a, b) for b in gens) for a in gens)


def moduli_dim(v: MukaiVector):
    return mukai_pair(v, v) + 2


def euler_pairing(v: MukaiVector, w: MukaiVector):
    return -mukai_pair(v, w)


def rr_line_bundle(D: DivisorClass) -> int:
    sq = D.square()
    if sq % 2:
        raise MukaiError(f"D^2 = {sq} is odd")
    return 2 + sq // 2


def hilbert_poly(v: MukaiVector, H: DivisorClass) -> Poly:
    """Reduced Hilbert polynomial chi(E(nH)) / r as a polynomial in n."""
    if v.r == 0:
        raise MukaiError("Hilbert polynomial normalization needs r >= 1")
    if H.lattice != v.lattice:
        raise LatticeError("polarization from another lattice")
    # chi(E(nH)) = r + s_n with s_n = s + n c1.H + n^2 r H^2 / 2
    n = ("n",)
    chi = Poly.const(v.r + v.s, n) + Poly.var("n", n) * v.c1.dot(H) + Poly.var("n", n) ** 2 * (Fraction(v.r) * H.square() / 2)
    return chi * (Fraction(1) / v.r)


def compare_hilbert(p: Poly, q: Poly) -> int:
    """Sign of p(n) - q(n) for n >> 0."""
    d = p - q
    if d.is_zero():
        return 0
    lead = d.coeff((d.degree(),))
    return 1 if lead > 0 else -1


def slope(v: MukaiVector, H: DivisorClass):
    if v.r == 0:
        raise MukaiError("slope undefined for rank 0")
    return normalize_scalar(Fraction(v.c1.dot(H)) / v.r)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    verdict: str
    witness: Optional[DivisorClass] = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = list(self.witness.coords)
            out["witness_str"] = str(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


def _isotropic_certificate(L, H, k, ok: str):
    res = isotropic_with_degree(L, H, k)
    if res.kind == "integral":
        return Certificate("witness", res.witness, f"f^2 = 0, f.H = {k}")
    detail = "no rational solution" if res.kind == "none_rational" else "rational solutions only"
    return Certificate(ok, None, detail)


def compactness_certificate(L: IntegerLattice, H: DivisorClass) -> Certificate:
    """Isotropic class of degree 4 obstructs compactness of M_H(2,H,2)."""
    return _isotropic_certificate(L, H, 4, "compact")


def ci_certificate(L: IntegerLattice, H: DivisorClass) -> Certificate:
    """Isotropic class of degree 3 (an elliptic cubic) obstructs the complete intersection."""
    return _isotropic_certificate(L, H, 3, "complete_intersection")


def strictly_semistable_split(L: IntegerLattice, H: DivisorClass):
    """(l1, sigma) with l1 + sigma = H, both isotropic, l1.sigma = 4."""
    res = isotropic_with_degree(L, H, 4)
    for sol in res.integral_solutions:
        l1 = L(sol)
        sig = H - l1
        if sig.square() == 0 and l1.dot(sig) == 4:
            return l1, sig
    return None


def fineness_parity_check(L_M: IntegerLattice, h: DivisorClass) -> dict:
    """Decide whether some isotropic (2, c, k) has c.h odd, using parities only.

    Isotropy of (2, c, k) means c^2 = 4k, so c^2 must be divisible by 4.  Both
    c^2 mod 4 and c.h mod 2 depend only on the coordinates of c mod 2.
    """
    if h.lattice != L_M:
        raise LatticeError("degree class from another lattice")
    table = []
    found = None
    for par in itertools.product((0, 1), repeat=L_M.rank):
        c = L_M(par)
        sq_ok = c.square() % 4 == 0
        odd = c.dot(h) % 2 == 1
        table.append({"parity": list(par), "square_mod_4": c.square() % 4, "degree_odd": odd})
        if sq_ok and odd and found is None:
            found = c
    verdict = "unobstructed" if found is not None else "obstructed"
    out = {"verdict": verdict, "parities": table}
    if found is not None:
        out["witness"] = list(found.coords)
    return out
