import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3mukai.exact_algebra import (
    AlgebraError,
    BinaryForm,
    Mat,
    Poly,
    SingularMatrixError,
    binary_form_is_square,
    mat_inverse,
    parse_poly,
    poly_det,
    squarefree_decomposition,
)

Y = ("y0", "y1", "y2")
y0, y1, y2 = (Poly.var(v, Y) for v in Y)


def leibniz_det(rows):
    # independent oracle: sum over permutations
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i, j in enumerate(perm):
            term = rows[i][j] * term
        total = term + total
    return total


def test_poly_arithmetic_and_str():
    p = (y0 + y1) ** 2 - y0 * y1 * 2
    assert p == y0**2 + y1**2
    assert str(parse_poly("3*y0^2 - y1*y2 + 1/2", Y)) == "3*y0^2 - y1*y2 + 1/2"
    assert p.degree() == 2 and p.is_homogeneous()
    assert (y0 * 3 + 1).content() == 1


def test_parse_rejects_division_by_polynomial():
    with pytest.raises(AlgebraError):
        parse_poly("y0 / y1", Y)


def test_subs_and_evaluate():
    p = y0 * y1 + y2**2
    assert p.subs({"y0": 0}) == y2**2
    assert p.evaluate((2, 3, Fraction(1, 2))) == Fraction(25, 4)


def test_poly_det_small_cases():
    assert poly_det(Mat.diag([y0, y0, y0, y1, y1, y2])) == y0**3 * y1**2 * y2
    assert Mat.from_rows([[5]]).det() == 5


def test_poly_det_of_fm_matrix_at_point():
    vars_ = ("a",)
    one = Poly.const(1, vars_)
    P = Mat.from_rows([[1, 58, 37, 2], [0, 25, 16, 1], [-1, 6, 4, 0], [-1, 45, 29, 2]]).map(lambda x: one * x)
    assert poly_det(P) == one


def test_bareiss_matches_cofactor_and_leibniz():
    m = [[y0 + y1, y2, y0], [y2, y1 - y0, y1 * 2], [y0, y1 * 2, y2 + y0]]
    M = Mat.from_rows(m)
    assert poly_det(M) == poly_det(M, "cofactor") == leibniz_det(m)


def test_poly_det_rejects_nonsquare():
    with pytest.raises(AlgebraError):
        poly_det(Mat(2, 3, [y0] * 6))


small = st.integers(-3, 3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.tuples(small, small, small), min_size=4, max_size=4), min_size=4, max_size=4))
def test_poly_det_property_vs_leibniz(coeffs):
    m = [[Poly.linear(c, Y) for c in row] for row in coeffs]
    assert poly_det(Mat.from_rows(m)) == leibniz_det(m)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.tuples(small, small, small), min_size=3, max_size=3), min_size=3, max_size=3),
       st.integers(0, 2), st.integers(0, 2))
def test_det_alternates_under_row_swap(coeffs, i, j):
    m = [[Poly.linear(c, Y) for c in row] for row in coeffs]
    swapped = list(m)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    d, ds = poly_det(Mat.from_rows(m)), poly_det(Mat.from_rows(swapped))
    assert ds == (d if i == j else -d)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=4, max_size=4),
       st.lists(st.tuples(small, small, small), min_size=4, max_size=4),
       st.lists(st.tuples(small, small, small), min_size=4, max_size=4))
def test_block_triangular_det_is_product(a, b, c):
    A = [[Poly.linear(x, Y) for x in a[:2]], [Poly.linear(x, Y) for x in a[2:]]]
    B = [[Poly.linear(x, Y) for x in b[:2]], [Poly.linear(x, Y) for x in b[2:]]]
    C = [[Poly.linear(x, Y) for x in c[:2]], [Poly.linear(x, Y) for x in c[2:]]]
    z = Poly(Y)
    big = [A[0] + C[0], A[1] + C[1], [z, z] + B[0], [z, z] + B[1]]
    assert poly_det(Mat.from_rows(big)) == poly_det(Mat.from_rows(A)) * poly_det(Mat.from_rows(B))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.tuples(small, small, small), min_size=3, max_size=3), min_size=3, max_size=3))
def test_restriction_commutes_with_det(coeffs):
    m = [[Poly.linear(c, Y) for c in row] for row in coeffs]
    restricted = [[e.subs({"y0": 0}) for e in row] for row in m]
    assert poly_det(Mat.from_rows(m)).subs({"y0": 0}) == poly_det(Mat.from_rows(restricted))


def test_mat_inverse_examples():
    assert mat_inverse(Mat.identity(4)) == Mat.identity(4)
    assert mat_inverse(Mat.diag([2, 4])) == Mat.diag([Fraction(1, 2), Fraction(1, 4)])
    P = Mat.from_rows([[1, 58, 37, 2], [0, 25, 16, 1], [-1, 6, 4, 0], [-1, 45, 29, 2]])
    inv = mat_inverse(P)
    assert inv.is_integral()
    assert inv.col(3) == (2, -9, 14, 1)
    with pytest.raises(SingularMatrixError):
        mat_inverse(Mat.from_rows([[1, 2], [2, 4]]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_is_involutive(rows):
    m = Mat.from_rows(rows)
    if m.det() == 0:
        return
    inv = mat_inverse(m)
    assert m @ inv == Mat.identity(3)
    assert mat_inverse(inv) == m


def test_binary_form_square_examples():
    f = BinaryForm(2, (1, 2, 1))
    assert binary_form_is_square(f) == BinaryForm(1, (1, 1))
    assert binary_form_is_square(BinaryForm(6, (1, 0, 0, 0, 0, 0, 0))) == BinaryForm(3, (1, 0, 0, 0))
    assert binary_form_is_square(BinaryForm(2, (1, 0, -1))) is None
    assert binary_form_is_square(BinaryForm(2, (-1, 0, 0))) is None
    with pytest.raises(AlgebraError):
        binary_form_is_square(BinaryForm(3, (1, 0, 0, 0)))


def test_square_with_vanishing_leading_terms():
    g = BinaryForm(3, (0, 0, 1, -2))  # x y^2 - 2 y^3
    assert binary_form_is_square(g * g) == g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4).flatmap(lambda d: st.lists(st.integers(-6, 6), min_size=d + 1, max_size=d + 1)))
def test_square_root_recovers_g(coeffs):
    g = BinaryForm(len(coeffs) - 1, tuple(coeffs))
    root = binary_form_is_square(g * g)
    assert root is not None
    assert root in (g, -g)


def test_root_multiplicities():
    assert BinaryForm(6, (0, 0, 0, 1, 0, 0, 0)).root_multiplicities() == (3, 3)
    assert BinaryForm(3, (1, -2, 1, 0)).root_multiplicities() == (2, 1)
    assert BinaryForm(2, (1, 0, 1)).is_squarefree()


def test_squarefree_decomposition_of_cube():
    # (x - 1)^3 (x + 2)
    p = [1, -1, -3, 5, -2]
    out = squarefree_decomposition(p)
    assert sorted((len(f) - 1, m) for f, m in out) == [(1, 1), (1, 3)]
