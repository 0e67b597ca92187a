"""Exact arithmetic: sparse polynomials, small dense matrices, binary forms.

Coefficients are Python ints or ``fractions.Fraction``; nothing here ever
touches floating point. Values are treated as immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import isqrt
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]


class AlgebraError(ValueError):
    pass


class SingularMatrixError(AlgebraError):
    pass


def normalize_scalar(c) -> Scalar:
    """Collapse integral Fractions to int so structural equality is stable."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return normalize_scalar(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact scalar: {c!r}")


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class Poly:
    """Sparse multivariate polynomial over a fixed ordered variable list.

    ``terms`` maps exponent tuples to nonzero coefficients.  Two polynomials
    are equal iff they share the variable list and the term maps agree.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.vars = tuple(vars)
        clean = {}
        n = len(self.vars)
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise AlgebraError(f"exponent {exp} does not match variables {self.vars}")
            if any(e < 0 for e in exp):
                raise AlgebraError(f"negative exponent in {exp}")
            c = normalize_scalar(c)
            if c:
                clean[exp] = c
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c, vars: Sequence[str]) -> "Poly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name: str, vars: Sequence[str]) -> "Poly":
        vars = tuple(vars)
        exp = tuple(1 if v == name else 0 for v in vars)
        if sum(exp) != 1:
            raise AlgebraError(f"{name!r} not among {vars}")
        return cls(vars, {exp: 1})

    @classmethod
    def linear(cls, coeffs: Sequence, vars: Sequence[str], constant=0) -> "Poly":
        vars = tuple(vars)
        n = len(vars)
        terms = {(0,) * n: constant}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(vars, terms)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise AlgebraError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        return Poly.const(other, self.vars)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = normalize_scalar(other)
            return Poly(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative power of a polynomial")
        out = Poly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            return self == Poly.const(other, self.vars)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coeff(self, exp: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exp), 0)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * len(self.vars), 0)

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading term")
        return max(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def content(self) -> Scalar:
        """gcd of numerators over lcm of denominators (nonnegative)."""
        if not self.terms:
            return 0
        from math import gcd, lcm
        nums = [Fraction(c).numerator for c in self.terms.values()]
        dens = [Fraction(c).denominator for c in self.terms.values()]
        return normalize_scalar(Fraction(reduce(gcd, nums), reduce(lcm, dens)))

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def used_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    # transformations ----------------------------------------------------
    def diff(self, name: str) -> "Poly":
        i = self.vars.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return Poly(self.vars, terms)

    def subs(self, values: Mapping[str, object], vars: Sequence[str] | None = None) -> "Poly":
        """Substitute scalars or polynomials for some variables.

        The result lives over ``vars`` (default: this polynomial's variables);
        substituted polynomials must already be over that list.
        """
        target = tuple(vars) if vars is not None else self.vars
        idx = {v: i for i, v in enumerate(self.vars)}
        for name in values:
            if name not in idx:
                raise AlgebraError(f"unknown variable {name!r}")
        # maps each variable to its replacement over `target`
        repl = []
        for v in self.vars:
            if v in values:
                val = values[v]
                repl.append(val if isinstance(val, Poly) else Poly.const(val, target))
            else:
                if v not in target:
                    raise AlgebraError(f"variable {v!r} not in target list {target}")
                repl.append(Poly.var(v, target))
        for r in repl:
            if r.vars != target:
                raise AlgebraError("substituted polynomial over the wrong variables")
        out = Poly(target)
        cache: dict[tuple[int, int], Poly] = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = repl[i] ** k
            return cache[(i, k)]

        for e, c in self.terms.items():
            term = Poly.const(c, target)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def evaluate(self, point: Mapping[str, object] | Sequence) -> Scalar:
        if not isinstance(point, Mapping):
            point = dict(zip(self.vars, point))
        vals = [normalize_scalar(point[v]) for v in self.vars]
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t = t * x**k
            total += t
        return normalize_scalar(total)

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; raises if ``other`` does not divide."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        le, lc = other.leading_term()
        rem = self
        quot: dict[tuple[int, ...], Scalar] = {}
        while not rem.is_zero():
            re, rc = rem.leading_term()
            if any(a < b for a, b in zip(re, le)):
                raise AlgebraError("division is not exact")
            qe = tuple(a - b for a, b in zip(re, le))
            qc = normalize_scalar(Fraction(rc) / Fraction(lc))
            quot[qe] = qc
            rem = rem - Poly(self.vars, {qe: qc}) * other
        return Poly(self.vars, quot)

    # display ------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Poly({self.vars}, {str(self)!r})"


def parse_poly(text: str, vars: Sequence[str]) -> Poly:
    """Parse a polynomial written with + - * ^ (or **), integer/rational literals."""
    import ast

    vars = tuple(vars)
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Poly.const(node.value, vars)
        if isinstance(node, ast.Name):
            return Poly.var(node.id, vars)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise AlgebraError("exponent must be an integer literal")
                return left ** node.right.value
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.degree() > 0:
                    raise AlgebraError("division only by constants")
                return left * (Fraction(1) / Fraction(right.constant_term()))
        raise AlgebraError(f"cannot parse {ast.dump(node)}")

    return walk(tree)


# ---------------------------------------------------------------------------
# dense matrices


class Mat:
    """Row-major dense matrix over ints, Fractions or Polys."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(e if isinstance(e, Poly) else normalize_scalar(e) for e in entries)
        if rows <= 0 or cols <= 0:
            raise AlgebraError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise AlgebraError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows, self.cols, self.entries = rows, cols, entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise AlgebraError("ragged or empty row list")
        return cls(len(rows), len(rows[0]), [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "Mat":
        n = len(values)
        zero = Poly.const(0, values[0].vars) if isinstance(values[0], Poly) else 0
        return cls(n, n, [values[i] if i == j else zero for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self):
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self):
        return self.rows == self.cols

    def has_poly(self) -> bool:
        return any(isinstance(e, Poly) for e in self.entries)

    def map(self, fn: Callable) -> "Mat":
        return Mat(self.rows, self.cols, [fn(e) for e in self.entries])

    def T(self) -> "Mat":
        return Mat(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise AlgebraError("shape mismatch in matrix product")
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                out.append(reduce(lambda acc, k: acc + r[k] * other[k, j], range(1, self.cols), r[0] * other[0, j]))
        return Mat(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise AlgebraError("vector length mismatch")
        return tuple(
            normalize_scalar(sum(self[i, k] * vec[k] for k in range(self.cols))) for i in range(self.rows)
        )

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise AlgebraError("shape mismatch")
        return Mat(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise AlgebraError("shape mismatch")
        return Mat(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __mul__(self, scalar) -> "Mat":
        return Mat(self.rows, self.cols, [e * scalar for e in self.entries])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for a, b in zip(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Mat({self.tolist()!r})"

    def is_integral(self) -> bool:
        return all(isinstance(e, int) for e in self.entries)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def det(self):
        if not self.is_square:
            raise AlgebraError("determinant of a non-square matrix")
        if self.has_poly():
            return poly_det(self)
        return _fraction_det(self)

    def rank(self) -> int:
        if self.has_poly():
            raise AlgebraError("rank is only implemented over the rationals")
        rows = [[Fraction(x) for x in self.row(i)] for i in range(self.rows)]
        return _rref(rows)[1]

    def inverse(self) -> "Mat":
        return mat_inverse(self)


def _rref(rows: list[list[Fraction]]):
    """In-place reduced row echelon form; returns (rows, rank)."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == nr:
            break
    return rows, r


def _fraction_det(m: Mat) -> Scalar:
    n = m.rows
    a = [[Fraction(x) for x in m.row(i)] for i in range(n)]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return normalize_scalar(det)


def _poly_vars(m: Mat) -> tuple[str, ...]:
    vs = {e.vars for e in m.entries if isinstance(e, Poly)}
    if len(vs) > 1:
        raise AlgebraError(f"entries over different variable lists: {sorted(vs)}")
    return vs.pop() if vs else ()


def poly_det(m: Mat, method: str = "bareiss") -> Poly:
    """Exact determinant of a square matrix of polynomials.

    ``method="bareiss"`` runs fraction-free elimination with exact polynomial
    division; ``method="cofactor"`` is a memoized Laplace expansion used as an
    independent check (cost grows like n*2^n, fine up to 6x6).
    """
    if not m.is_square:
        raise AlgebraError("determinant of a non-square matrix")
    vars = _poly_vars(m)
    a = [[e if isinstance(e, Poly) else Poly.const(e, vars) for e in m.row(i)] for i in range(m.rows)]
    n = m.rows
    if method == "cofactor":
        return _cofactor_det(a, vars)
    if method != "bareiss":
        raise AlgebraError(f"unknown determinant method {method!r}")
    if n == 1:
        return a[0][0]
    sign = 1
    prev = Poly.const(1, vars)
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if piv is None:
            return Poly(vars)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
            a[i][k] = Poly(vars)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def _cofactor_det(a: list[list[Poly]], vars) -> Poly:
    n = len(a)
    memo: dict[tuple[int, int], Poly] = {}

    def minor(row: int, mask: int) -> Poly:
        if row == n:
            return Poly.const(1, vars)
        key = (row, mask)
        if key in memo:
            return memo[key]
        total = Poly(vars)
        pos = 0
        for j in range(n):
            if mask >> j & 1:
                continue
            if not a[row][j].is_zero():
                term = a[row][j] * minor(row + 1, mask | 1 << j)
                total = total - term if pos % 2 else total + term
            pos += 1
        memo[key] = total
        return total

    return minor(0, 0)


def mat_inverse(m: Mat) -> Mat:
    """Inverse over the rationals by Gauss-Jordan elimination."""
    if not m.is_square:
        raise AlgebraError("inverse of a non-square matrix")
    if m.has_poly():
        raise AlgebraError("inverse is only implemented over the rationals")
    n = m.rows
    rows = [[Fraction(x) for x in m.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows, _ = _rref(rows)
    for i in range(n):
        if rows[i][i] != 1 or any(rows[i][j] != 0 for j in range(n) if j != i):
            raise SingularMatrixError("matrix is singular")
    return Mat(n, n, [rows[i][n + j] for i in range(n) for j in range(n)])


# ---------------------------------------------------------------------------
# univariate helpers over Q (coefficient lists, highest degree first)


def _ustrip(p):
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return p[i:]


def _udivmod(p, q):
    p = [Fraction(x) for x in _ustrip(p)]
    q = [Fraction(x) for x in _ustrip(q)]
    if not q:
        raise ZeroDivisionError
    out = []
    while len(p) >= len(q):
        f = p[0] / q[0]
        out.append(f)
        p = [a - f * b for a, b in zip(p, q + [0] * (len(p) - len(q)))][1:]
    return out or [Fraction(0)], _ustrip(p)


def _umonic(p):
    p = _ustrip(p)
    return [Fraction(x) / p[0] for x in p] if p else []


def _ugcd(p, q):
    p, q = _ustrip(p), _ustrip(q)
    while q:
        p, q = q, _udivmod(p, q)[1]
    return _umonic(p)


def _uderiv(p):
    d = len(p) - 1
    return [c * (d - i) for i, c in enumerate(p[:-1])]


def _usub(p, q):
    n = max(len(p), len(q))
    p = [0] * (n - len(p)) + list(p)
    q = [0] * (n - len(q)) + list(q)
    return _ustrip([a - b for a, b in zip(p, q)])


def squarefree_decomposition(p: Sequence) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: monic factors f_i (pairwise coprime, squarefree) with p = c * prod f_i^i."""
    p = _ustrip(list(p))
    if len(p) <= 1:
        return []
    out = []
    dp = _uderiv(p)
    a = _ugcd(p, dp)
    b = _udivmod(p, a)[0]
    c = _udivmod(dp, a)[0]
    d = _usub(c, _uderiv(b))
    i = 1
    while len(_ustrip(b)) > 1:
        g = _ugcd(b, d) if d else _umonic(b)
        if len(g) > 1:
            out.append((g, i))
        b = _udivmod(b, g)[0]
        c = _udivmod(d, g)[0] if d else [Fraction(0)]
        d = _usub(c, _uderiv(b))
        i += 1
    return out


# ---------------------------------------------------------------------------
# binary forms


@dataclass(frozen=True)
class BinaryForm:
    """Form sum_i coeffs[i] * x^(degree-i) * y^i in two variables."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        if self.degree < 0:
            raise AlgebraError("negative degree")
        object.__setattr__(self, "coeffs", tuple(normalize_scalar(c) for c in self.coeffs))
        if len(self.coeffs) != self.degree + 1:
            raise AlgebraError("binary form needs degree+1 coefficients")

    @classmethod
    def from_poly(cls, p: Poly, degree: int | None = None) -> "BinaryForm":
        if len(p.vars) != 2:
            raise AlgebraError("binary form needs a polynomial in two variables")
        if not p.is_homogeneous():
            raise AlgebraError("polynomial is not homogeneous")
        d = p.degree() if degree is None else degree
        if p.is_zero():
            return cls(max(d, 0), (0,) * (max(d, 0) + 1))
        if p.degree() != d:
            raise AlgebraError(f"expected degree {d}, got {p.degree()}")
        return cls(d, tuple(p.coeff((d - i, i)) for i in range(d + 1)))

    def to_poly(self, vars: Sequence[str] = ("x", "y")) -> Poly:
        d = self.degree
        return Poly(vars, {(d - i, i): c for i, c in enumerate(self.coeffs)})

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            out = [0] * (self.degree + other.degree + 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return BinaryForm(self.degree + other.degree, tuple(out))
        return BinaryForm(self.degree, tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def evaluate(self, x, y):
        d = self.degree
        return normalize_scalar(sum(c * x ** (d - i) * y**i for i, c in enumerate(self.coeffs)))

    def leading_coefficient(self):
        return next((c for c in self.coeffs if c), 0)

    def root_multiplicities(self) -> tuple[int, ...]:
        """Multiplicities of the roots on P^1 over an algebraic closure, descending."""
        if self.is_zero():
            raise AlgebraError("the zero form has no root structure")
        j = next(i for i, c in enumerate(self.coeffs) if c)
        mults = [j] if j else []  # y^j divides: root (1:0)
        finite = list(self.coeffs[j:])  # dehomogenize at y=1, powers of x highest first
        for factor, m in squarefree_decomposition(finite):
            mults.extend([m] * (len(factor) - 1))
        return tuple(sorted(mults, reverse=True))

    def is_squarefree(self) -> bool:
        return all(m == 1 for m in self.root_multiplicities())


def _rational_sqrt(q) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def binary_form_is_square(f: BinaryForm) -> BinaryForm | None:
    """Return g with g*g == f over Q (positive leading coefficient), else None."""
    if f.degree % 2:
        raise AlgebraError("odd-degree form cannot be a square")
    k = f.degree // 2
    if f.is_zero():
        return BinaryForm(k, (0,) * (k + 1))
    j = next(i for i, c in enumerate(f.coeffs) if c)
    if j % 2:
        return None
    rest = f.coeffs[j:]
    # f = x^0... y^j * h(x, y) with h of degree 2k - j and nonzero x-leading term
    m = (len(rest) - 1) // 2
    g0 = _rational_sqrt(rest[0])
    if g0 is None:
        return None
    g = [g0]
    for i in range(1, m + 1):
        acc = Fraction(rest[i]) - sum(g[a] * g[i - a] for a in range(1, i))
        g.append(acc / (2 * g0))
    cand = BinaryForm(m, tuple(g))
    if (cand * cand).coeffs != tuple(rest):
        return None
    coeffs = (0,) * (j // 2) + cand.coeffs
    return BinaryForm(k, coeffs)
