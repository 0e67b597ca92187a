"""Integral cohomology of Gr(2,4), the smooth quadric fourfold, in the Schubert basis."""
from __future__ import annotations

from dataclasses import dataclass

from .lattice import IntegerLattice
from .mukai import MukaiVector, from_chern

BASIS = ("1", "s1", "s2", "s11", "s21", "pt")
CODIM = (0, 1, 2, 2, 3, 4)

# products of basis elements below codimension 4 overflow; the rest vanish
_TABLE = {
    ("s1", "s1"): {"s2": 1, "s11": 1},
    ("s1", "s2"): {"s21": 1},
    ("s1", "s11"): {"s21": 1},
    ("s1", "s21"): {"pt": 1},
    ("s2", "s2"): {"pt": 1},
    ("s11", "s11"): {"pt": 1},
    ("s2", "s11"): {},
}


@dataclass(frozen=True)
class SchubertClass:
    coeffs: tuple = (0,) * 6

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        if len(c) != 6:
            raise ValueError("a Schubert class has six coefficients")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, name: str) -> "SchubertClass":
        return cls(tuple(int(b == name) for b in BASIS))

    def __add__(self, other):
        return SchubertClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return SchubertClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, k: int):
        return SchubertClass(tuple(a * k for a in self.coeffs))

    __rmul__ = __mul__

    def is_homogeneous(self) -> bool:
        return len({CODIM[i] for i, c in enumerate(self.coeffs) if c}) <= 1

    def __str__(self):
        parts = [f"{c}*{b}" if c != 1 else b for c, b in zip(self.coeffs, BASIS) if c]
        return " + ".join(parts) or "0"


def _basis_product(a: str, b: str) -> dict:
    if a == "1":
        return {b: 1}
    if b == "1":
        return {a: 1}
    if CODIM[BASIS.index(a)] + CODIM[BASIS.index(b)] > 4:
        return {}
    return _TABLE.get((a, b), _TABLE.get((b, a), {}))


def cup(a: SchubertClass, b: SchubertClass) -> SchubertClass:
    out = [0] * 6
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j, y in enumerate(b.coeffs):
            if not y:
                continue
            for name, c in _basis_product(BASIS[i], BASIS[j]).items():
                out[BASIS.index(name)] += x * y * c
    return SchubertClass(tuple(out))


def degree(a: SchubertClass) -> int:
    return a.coeffs[-1]


def surface_class() -> SchubertClass:
    """Class of a surface cut out by two further quadrics, each of class 2*s1."""
    two_s1 = SchubertClass.basis("s1") * 2
    return cup(two_s1, two_s1)


def spinor_mukai_vector(which: str, L: IntegerLattice | None = None) -> MukaiVector:
    """Mukai vector of the restricted dual spinor bundle (``S_dual``) or of the quotient bundle (``F``).

    Both have c1 = H and c2 equal to the degree of the surface against s11
    (resp. s2).  ``L`` defaults to the rank-one lattice [[8]].
    """
    L = L or IntegerLattice(((8,),), ("H",))
    H = L.basis("H") if "H" in L.basis_names else L((1,) + (0,) * (L.rank - 1))
    codim2 = {"S_dual": "s11", "F": "s2"}
    if which not in codim2:
        raise ValueError(f"unknown bundle {which!r}; use 'S_dual' or 'F'")
    c2 = degree(cup(surface_class(), SchubertClass.basis(codim2[which])))
    return from_chern(2, H, c2)
