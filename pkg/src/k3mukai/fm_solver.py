"""Cohomological Fourier-Mukai matrix for the degree-8 K3 containing a line.

Work in the algebraic Mukai lattice with basis (1,0,0), (0,H,0), (0,l,0),
(0,0,1).  The transform f is pinned down by where it sends v = (2,H,2) and a
basis of v-perp / Zv; the matrix P of f^-1 then has a handful of unknowns.
P^T A P = A is solved by linear elimination down to one quadratic in three
unknowns, whose small-height rational points are enumerated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .exact_algebra import Mat, Poly, SingularMatrixError, _rref, normalize_scalar, poly_det
from .lattice import LINE_GRAM, DivisorClass, IntegerLattice
from .mukai import MukaiVector, is_isotropic, is_primitive, mukai_gram, mukai_pair, twist, twist_equivalent

PARAMS = ("a", "b", "c", "d", "s", "t")
FREE_COLUMN = ("a", "b", "c", "d")
SHIFT_PARAMS = ("s", "t")


class FMError(ValueError):
    pass


def line_lattice() -> IntegerLattice:
    return IntegerLattice(LINE_GRAM, ("H", "l"))


def standard_v(L: IntegerLattice | None = None) -> MukaiVector:
    L = L or line_lattice()
    return MukaiVector(2, L.basis("H"), 2)


def mukai_lattice_gram(L: IntegerLattice | None = None) -> Mat:
    return Mat.from_rows(mukai_gram(L or line_lattice()))


def _vec(L: IntegerLattice, coords) -> MukaiVector:
    return MukaiVector.from_coords(L, coords)


# ---------------------------------------------------------------------------
# v-perp / Zv


def normalize_mod(u: MukaiVector, v: MukaiVector) -> MukaiVector:
    """Representative of u + Zv with rank component in [0, |v.r|)."""
    if v.r == 0:
        return u
    k = u.r // v.r if v.r > 0 else -(u.r // -v.r)
    rep = u - v * k
    if not 0 <= rep.r < abs(v.r):  # negative v.r
        rep = rep + v * (1 if rep.r < 0 else -1)
    return rep


def _perp_reps(v: MukaiVector, bound: int) -> list[MukaiVector]:
    """Normalized representatives of nonzero classes in v-perp / Zv with small entries."""
    L = v.lattice
    n = L.rank + 2
    out = set()
    for coords in itertools.product(range(-bound, bound + 1), repeat=n - 1):
        for r in range(abs(v.r) if v.r else 1):
            u = _vec(L, (r,) + coords)
            if mukai_pair(u, v) == 0:
                u = normalize_mod(u, v)
                if any(u.coords()) and not _is_multiple_of(u, v):
                    out.add(u.coords())
    return [_vec(L, c) for c in sorted(out)]


def _is_multiple_of(u: MukaiVector, v: MukaiVector) -> bool:
    return Mat.from_rows([list(u.coords()), list(v.coords())]).rank() < 2


@dataclass(frozen=True)
class CosetBasis:
    x: MukaiVector
    w: MukaiVector
    pairing: tuple

    def to_json(self) -> dict:
        return {"x": str(self.x), "w": str(self.w), "pairing": [list(r) for r in self.pairing]}


def _l1(u: MukaiVector) -> int:
    return sum(abs(c) for c in u.coords())


def vperp_mod_v_basis(v: MukaiVector | None = None, target=((2, 5), (5, 4)), bound: int = 4) -> CosetBasis:
    """Basis x, w of v-perp / Zv whose pairing matrix is ``target``.

    Representatives have rank component reduced into [0, v.r).  Among all
    valid pairs in the search box the one of smallest total absolute value
    wins, ties broken by coordinates.
    """
    v = v or standard_v()
    if not is_isotropic(v):
        raise FMError("v must be isotropic for v-perp / Zv to carry a form")
    target = tuple(tuple(int(x) for x in r) for r in target)
    reps = _perp_reps(v, bound)
    by_square: dict[int, list[MukaiVector]] = {}
    for u in reps:
        by_square.setdefault(mukai_pair(u, u), []).append(u)
    best = None
    for x in by_square.get(target[0][0], []):
        for w in by_square.get(target[1][1], []):
            if mukai_pair(x, w) != target[0][1]:
                continue
            key = (_l1(x) + _l1(w), x.coords(), w.coords())
            if best is None or key < best[0]:
                best = (key, x, w)
    if best is None:
        raise FMError(f"no coset basis with pairing {target} within bound {bound}")
    _, x, w = best
    # the quotient has |disc| = |disc Pic|, so a pair with the same |det| is a basis
    disc = Mat.from_rows(v.lattice.gram).det()
    if abs(Mat.from_rows(target).det()) != abs(disc):
        raise FMError("target pairing does not have the discriminant of the quotient")
    return CosetBasis(x, w, ((mukai_pair(x, x), mukai_pair(x, w)), (mukai_pair(w, x), mukai_pair(w, w))))


# ---------------------------------------------------------------------------
# constraints


@dataclass(frozen=True)
class Image:
    """f(source) = target; with ``coset`` the source is only known modulo Zv."""

    source: MukaiVector
    target: MukaiVector
    coset: bool = False


@dataclass
class PartialFMMatrix:
    P: Mat  # matrix of f^-1 in the Mukai basis, entries Poly over PARAMS
    params: tuple
    images: tuple
    v: Optional[MukaiVector]
    A: Mat

    def to_json(self) -> dict:
        return {
            "P": [[str(e) for e in row] for row in self.P.tolist()],
            "params": list(self.params),
        }


def _solve_rational(cols: list[tuple], rhs: tuple) -> Optional[list[Fraction]]:
    """Coefficients alpha with sum alpha_k cols[k] = rhs, or None."""
    n, k = len(rhs), len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(rhs[i])] for i in range(n)]
    rows, rank = _rref(rows)
    for r in rows[rank:]:
        if r[-1] != 0:
            return None
    alpha = [Fraction(0)] * k
    for r in rows[:rank]:
        piv = next(j for j in range(k + 1) if r[j] != 0)
        if piv == k:
            return None
        alpha[piv] = r[-1]
    return alpha


def build_constraints(images: Sequence[Image], v: Optional[MukaiVector] = None) -> PartialFMMatrix:
    """Columns of f^-1 forced by the images, with free symbols elsewhere.

    A basis vector in the span of the targets gets the matching combination of
    sources, plus a free multiple of v when a coset source contributes.  Any
    other basis vector gets a fully free column (symbols a, b, c, d).
    """
    if not images:
        raise FMError("need at least one image constraint")
    L = images[0].source.lattice
    n = L.rank + 2
    targets = [im.target.coords() for im in images]
    if Mat.from_rows([list(t) for t in targets]).rank() < len(targets):
        raise FMError("image targets are linearly dependent")
    if any(im.coset for im in images) and v is None:
        raise FMError("coset constraints need the vector v")
    # consistency: f must respect pairings on the constrained sublattice
    for i, a in enumerate(images):
        for b in images[i:]:
            if a.coset or b.coset:
                ok = v is not None and mukai_pair(a.source, v) == 0 and mukai_pair(b.source, v) == 0
            else:
                ok = True
            if not ok or mukai_pair(a.source, b.source) != mukai_pair(a.target, b.target):
                raise FMError(f"constraints {a.source}->{a.target} and {b.source}->{b.target} are not isometric")

    columns: list[list] = []
    free_names = list(FREE_COLUMN)
    shift_names = list(SHIFT_PARAMS)
    used: list[str] = []
    pending = []
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        alpha = _solve_rational(targets, e)
        pending.append(alpha)
    # symbols are assigned after we know how many are needed
    n_free = sum(a is None for a in pending)
    n_shift = sum(a is not None and any(al and im.coset for al, im in zip(a, images)) for a in pending)
    if n_free > 1:
        raise FMError("more than one unconstrained column is not supported")
    if n_shift > len(shift_names):
        raise FMError("too many coset shifts")
    for alpha in pending:
        if alpha is None:
            names = free_names[:n]
            used.extend(names)
            columns.append([("var", nm) for nm in names])
            continue
        col = [Fraction(0)] * n
        for al, im in zip(alpha, images):
            for j, c in enumerate(im.source.coords()):
                col[j] += al * c
        shift = None
        if any(al and im.coset for al, im in zip(alpha, images)):
            shift = shift_names.pop(0)
            used.append(shift)
        columns.append([("lin", col[j], shift, v.coords()[j] if shift else 0) for j in range(n)])
    params = tuple(p for p in PARAMS if p in used) or ()
    pvars = params or ("a",)  # keep a nonempty variable list for constant matrices

    def entry(cell) -> Poly:
        if cell[0] == "var":
            return Poly.var(cell[1], pvars)
        _, const, shift, coef = cell
        p = Poly.const(normalize_scalar(const), pvars)
        if shift:
            p = p + Poly.var(shift, pvars) * coef
        return p

    P = Mat(n, n, [entry(columns[j][i]) for i in range(n) for j in range(n)])
    return PartialFMMatrix(P, params, tuple(images), v, mukai_lattice_gram(L))


def branch_images(branch: str = "positive", L: IntegerLattice | None = None) -> tuple[list[Image], MukaiVector]:
    """Image constraints for f: v to the fundamental class, coset basis to (h, D) up to sign."""
    L = L or line_lattice()
    v = standard_v(L)
    cb = vperp_mod_v_basis(v)
    H, l = L.basis("H"), L.basis("l")
    h, D = 2 * H - 3 * l, H - l
    zero = L.zero()
    fund = MukaiVector(0, zero, 1)
    if branch == "positive":
        pairs = [(cb.x, h), (cb.w, D)]
    elif branch == "negative":
        pairs = [(cb.x, -h), (cb.w, -D)]
    elif branch == "second":
        pairs = [(cb.x, h), (normalize_mod(cb.x * 5 - cb.w, v), D)]
    else:
        raise FMError(f"unknown branch {branch!r}; use positive, negative or second")
    images = [Image(v, fund)]
    images += [Image(src, MukaiVector(0, tgt, 0), coset=True) for src, tgt in pairs]
    return images, v


# ---------------------------------------------------------------------------
# the isometry equations


@dataclass
class IsometrySystem:
    det: Poly  # det P as a polynomial
    linear_relations: dict  # solved var -> relation poly (solved var has coefficient +1)
    solved: dict  # solved var -> expression in the remaining vars
    order: tuple  # elimination order
    residual: tuple  # remaining nonzero equations after elimination
    raw: tuple  # all entries of P^T A P - A on and above the diagonal
    eliminated: bool = True
    note: str = ""

    @property
    def q(self) -> Poly:
        if len(self.residual) != 1:
            raise FMError(f"expected one residual equation, have {len(self.residual)}")
        return self.residual[0]

    def to_json(self) -> dict:
        return {
            "det": str(self.det),
            "linear_relations": {k: str(p) for k, p in self.linear_relations.items()},
            "residual": [str(p) for p in self.residual],
            "eliminated": self.eliminated,
            "note": self.note,
        }


def _linear_pivot(eq: Poly, order: Sequence[str]):
    """A variable in which eq is linear with constant coefficient, units preferred."""
    if eq.degree() > 2 or eq.is_zero():
        return None
    best = None
    for name in order:
        i = eq.vars.index(name)
        if eq.degree_in(name) != 1:
            continue
        rest_has = any(e[i] == 1 and sum(e) > 1 for e in eq.terms)
        if rest_has:
            continue  # coefficient of name is not constant
        coef = eq.coeff(tuple(int(j == i) for j in range(len(eq.vars))))
        if coef in (1, -1):
            return name, coef
        if best is None:
            best = (name, coef)
    return best


def isometry_system(pm: PartialFMMatrix) -> IsometrySystem:
    """Eliminate linear unknowns from P^T A P = A one equation at a time."""
    P, A = pm.P, pm.A
    R = P.T() @ A @ P - A
    n = P.rows
    raw = tuple(R[i, j] for i in range(n) for j in range(i, n))
    raw = tuple(e if isinstance(e, Poly) else Poly.const(e, P[0, 0].vars) for e in raw)
    eqs = [e for e in raw if not e.is_zero()]
    det = poly_det(P) if P.has_poly() else P.det()
    relations, solved, order = {}, {}, []
    while True:
        pick = None
        for k, eq in enumerate(eqs):
            if eq.degree() != 1:
                continue
            piv = _linear_pivot(eq, [p for p in pm.params if p not in solved])
            if piv is not None:
                pick = (k, eq, *piv)
                break
        if pick is None:
            break
        k, eq, name, coef = pick
        rel = eq * (Fraction(1) / coef)
        relations[name] = rel
        expr = Poly.var(name, eq.vars) - rel
        solved[name] = expr
        order.append(name)
        # keep earlier expressions free of the new variable
        for other in list(solved):
            if other != name:
                solved[other] = solved[other].subs({name: expr})
        eqs = [e.subs({name: expr}) for j, e in enumerate(eqs) if j != k]
        eqs = [e for e in eqs if not e.is_zero()]
    # drop scalar multiples of an earlier residual
    residual = []
    for e in eqs:
        if not any(_proportional(e, r) for r in residual):
            residual.append(e)
    note = ""
    eliminated = True
    if len(residual) != 1 or residual[0].degree() > 2:
        eliminated = False
        note = f"elimination left {len(residual)} equations; the raw system is returned alongside"
    return IsometrySystem(det, relations, solved, tuple(order), tuple(residual), raw, eliminated, note)


def _proportional(p: Poly, q: Poly) -> bool:
    if set(p.terms) != set(q.terms):
        return False
    e0 = next(iter(p.terms))
    ratio = Fraction(p.terms[e0]) / Fraction(q.terms[e0])
    return all(Fraction(p.terms[e]) == ratio * q.terms[e] for e in p.terms)


# ---------------------------------------------------------------------------
# points


def rationals_up_to(height: int) -> list[Fraction]:
    """Rationals n/m with |n| <= height and 1 <= m <= height (height 0 gives {0})."""
    vals = {Fraction(n, m) for m in range(1, max(height, 1) + 1) for n in range(-height, height + 1)}
    return sorted(vals)


def _homogenize(q: Poly, names: Sequence[str]) -> Poly:
    hv = tuple(names) + ("_z",)
    idx = [q.vars.index(nm) for nm in names]
    deg = q.degree()
    terms = {}
    for e, c in q.terms.items():
        if any(e[i] for i in range(len(e)) if i not in idx):
            raise FMError("polynomial involves variables outside the search")
        sub = tuple(e[i] for i in idx)
        terms[sub + (deg - sum(sub),)] = c
    return Poly(hv, terms)


def solve_points(q: Poly, height: int, names: Sequence[str] | None = None) -> list[tuple]:
    """Rational zeros of q with coordinates n/m, |n| <= height, 1 <= m <= height."""
    names = tuple(names or q.used_vars())
    if height < 0:
        raise FMError("height must be nonnegative")
    vals = rationals_up_to(height)
    if not names:
        return [()] if q.is_zero() else []
    hq = _homogenize(q, names)
    den = hq.content()  # make coefficients integral
    if not hq.is_integral():
        hq = hq * (Fraction(1) / den)
    nums = np.array([v.numerator for v in vals], dtype=np.int64)
    dens = np.array([v.denominator for v in vals], dtype=np.int64)
    k = len(names)
    idx = np.stack(np.meshgrid(*[np.arange(len(vals))] * k, indexing="ij"), axis=-1).reshape(-1, k)
    D = dens[idx[:, 0]]
    for j in range(1, k):
        D = np.lcm(D, dens[idx[:, j]])
    cols = [nums[idx[:, j]] * (D // dens[idx[:, j]]) for j in range(k)]
    pts = np.stack(cols + [D], axis=1)
    mask = _kernels.zero_mask(hq, pts)
    out = []
    for row in idx[mask]:
        p = tuple(normalize_scalar(vals[i]) for i in row)
        if q.evaluate(dict(zip(names, p)) | {v: 0 for v in q.vars if v not in names}) == 0:
            out.append(p)
    return sorted(out)


# ---------------------------------------------------------------------------
# solutions


def vex_closed_form(a, b, d, L: IntegerLattice | None = None) -> MukaiVector:
    """Parametric v(E_x) = (2, (6a-32b+10d-5)H + (-10a+52b-16d+8)l, a) on the positive branch."""
    L = L or line_lattice()
    return MukaiVector(2, L((6 * a - 32 * b + 10 * d - 5, -10 * a + 52 * b - 16 * d + 8)), a)


def twist_closed_form(a, b, d, L: IntegerLattice | None = None) -> DivisorClass:
    """Parametric normalizing twist (3-5d+16b-3a)H + (5a-26b+8d-4)l on the positive branch."""
    L = L or line_lattice()
    return L((3 - 5 * d + 16 * b - 3 * a, 5 * a - 26 * b + 8 * d - 4))


@dataclass
class FMSolution:
    point: dict
    P_num: Mat
    f_E: Mat
    vEx: MukaiVector
    twist_class: DivisorClass
    normalized: MukaiVector
    integral: bool
    images: tuple = field(default=(), repr=False)
    v: Optional[MukaiVector] = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "point": {k: str(x) for k, x in self.point.items()},
            "vEx": str(self.vEx),
            "twist": str(self.twist_class),
            "normalized": str(self.normalized),
            "integral": self.integral,
        }


def assemble(system: IsometrySystem, pm: PartialFMMatrix, point) -> FMSolution:
    """Numeric matrix at a point of the residual variety, its inverse and v(E_x)."""
    free = [p for p in pm.params if p not in system.solved]
    if not isinstance(point, dict):
        point = dict(zip(free, point))
    vals = {k: normalize_scalar(Fraction(x)) for k, x in point.items()}
    if set(vals) != set(free):
        raise FMError(f"point must give values for {free}")
    for name in system.solved:
        vals[name] = system.solved[name].evaluate({**vals, **{n: 0 for n in system.solved if n not in vals}})
    for eq in system.residual:
        if eq.evaluate(vals) != 0:
            raise FMError(f"point {point} is not on the residual variety")
    P_num = pm.P.map(lambda e: e.evaluate(vals) if isinstance(e, Poly) else e)
    if P_num.T() @ pm.A @ P_num != pm.A:
        raise FMError("numeric matrix fails P^T A P = A; the elimination is wrong")
    try:
        f_E = P_num.inverse()
    except SingularMatrixError as exc:
        raise FMError("matrix is singular at this point") from exc
    L = pm.images[0].source.lattice
    n = P_num.rows
    fund = tuple(int(i == n - 1) for i in range(n))
    vEx = _vec(L, f_E.apply(fund))
    target = pm.v if pm.v is not None else vEx
    lam = twist_equivalent(vEx, target, allow_rational=True)
    if lam is None:
        raise FMError(f"v(E_x) = {vEx} is not twist equivalent to {target}")
    normalized = twist(vEx, lam)
    return FMSolution(
        {k: vals[k] for k in pm.params},
        P_num,
        f_E,
        vEx,
        lam,
        normalized,
        f_E.is_integral() and P_num.is_integral(),
        pm.images,
        pm.v,
    )


def verify_hodge_isometry(sol: FMSolution, A: Mat | None = None) -> dict:
    n = sol.P_num.rows
    A = A if A is not None else mukai_lattice_gram(sol.vEx.lattice)
    isometry = sol.P_num.T() @ A @ sol.P_num == A
    det = sol.P_num.det()
    fund = tuple(int(i == n - 1) for i in range(n))
    report = {
        "isometry": isometry,
        "det": str(det),
        "unimodular": det in (1, -1),
        "integral": sol.f_E.is_integral() and sol.P_num.is_integral(),
    }
    if sol.v is not None:
        report["v_to_fundamental"] = tuple(sol.f_E.apply(sol.v.coords())) == fund
    images_ok = True
    for im in sol.images:
        img = sol.f_E.apply(im.source.coords())
        diff = [x - y for x, y in zip(img, im.target.coords())]
        if im.coset:
            ok = all(x == 0 for x in diff[:-1])  # agrees modulo the fundamental class f(v)
        else:
            ok = all(x == 0 for x in diff)
        images_ok = images_ok and ok
    report["images_match"] = images_ok
    report["vEx_isotropic"] = is_isotropic(sol.vEx)
    report["vEx_primitive"] = is_primitive(sol.vEx)
    report["passed"] = bool(isometry and images_ok and report.get("v_to_fundamental", True))
    return report


@dataclass
class BranchResult:
    branch: str
    partial: PartialFMMatrix
    system: IsometrySystem
    points: list
    solutions: list
    reports: list

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "P": self.partial.to_json()["P"],
            "system": self.system.to_json(),
            "points": [[str(c) for c in p] for p in self.points],
            "solutions": [
                {**s.to_json(), "checks": {k: v for k, v in r.items()}} for s, r in zip(self.solutions, self.reports)
            ],
        }


def run_branch(branch: str = "positive", height: int = 5, L: IntegerLattice | None = None) -> BranchResult:
    images, v = branch_images(branch, L)
    pm = build_constraints(images, v)
    system = isometry_system(pm)
    points, sols, reports = [], [], []
    if system.eliminated:
        free = [p for p in pm.params if p not in system.solved]
        points = solve_points(system.q, height, free)
        for pt in points:
            sol = assemble(system, pm, dict(zip(free, pt)))
            sols.append(sol)
            reports.append(verify_hodge_isometry(sol))
    return BranchResult(branch, pm, system, points, sols, reports)
