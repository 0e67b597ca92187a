import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3mukai.exact_algebra import BinaryForm, Mat, Poly, binary_form_is_square
from k3mukai.quadric_net import (
    YVARS,
    LineComponentError,
    LinearFormMatrix,
    NetError,
    PlaneSextic,
    build_conic_block_net,
    det_sextic,
    load_net,
    pencil_branch_form,
    primitive_points,
    random_conic_block_net,
    random_net,
    rank_at,
    restrict_to_line,
    singular_point_scan,
    square_up_to_scalar,
    tritangent_certificate,
)

y0, y1, y2 = (Poly.var(v, YVARS) for v in YVARS)
Z = Poly(YVARS)


def diag_net():
    d = [y0, y0, y0, y1, y1, y2]
    return LinearFormMatrix.from_poly_matrix([[d[i] if i == j else Z for j in range(6)] for i in range(6)])


def six_lines():
    return PlaneSextic(y0 * y1 * y2 * (y0 + y1) * (y0 + y2) * (y1 + y2))


def test_diag_net():
    N = diag_net()
    assert det_sextic(N).poly == y0**3 * y1**2 * y2
    assert rank_at(N, (1, 1, 1)) == 6
    assert rank_at(N, (0, 1, 1)) == 3
    with pytest.raises(NetError):
        rank_at(N, (0, 0, 0))


def test_rejects_asymmetric():
    N0 = [[0] * 6 for _ in range(6)]
    N0[0][1] = 1
    with pytest.raises(NetError):
        LinearFormMatrix(N0, [[0] * 6] * 6, [[0] * 6] * 6)


def test_load_net(tmp_path):
    p = tmp_path / "net.json"
    p.write_text(json.dumps(diag_net().to_json()))
    assert load_net(p) == diag_net()


def test_conic_block_example():
    A = [[y1, Z, Z], [Z, y1, Z], [Z, Z, y2]]
    D = [[Z] * 3] * 3
    C = det_sextic(build_conic_block_net(A, D))
    # Schur complement: det = det(y0 I) det(D - A^T A / y0) = -(y1^2 y2)^2 when D = 0
    assert C.poly == -(y1**4) * y2**2
    f = restrict_to_line(C, (1, 0, 0))
    assert square_up_to_scalar(f) == BinaryForm(3, (0, 1, 0, 0))
    assert binary_form_is_square(-f) == BinaryForm(3, (0, 1, 0, 0))
    C2 = det_sextic(build_conic_block_net([[Z] * 3] * 3, [[y1, Z, Z], [Z, y1, Z], [Z, Z, y2]]))
    assert C2.poly == y0**3 * y1**2 * y2


def test_conic_block_rejects_asymmetric_D():
    with pytest.raises(NetError):
        build_conic_block_net([[Z] * 3] * 3, [[Z, y1, Z], [Z, Z, Z], [Z, Z, Z]])


def test_restriction_on_y0_is_minus_square_of_detA():
    rng = random.Random(5)
    for _ in range(5):
        A = [[tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(3)] for _ in range(3)]
        D = [[(0, 0, 0)] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                D[i][j] = D[j][i] = tuple(rng.randint(-3, 3) for _ in range(3))
        C = det_sextic(build_conic_block_net(A, D))
        detA = Mat.from_rows([[Poly.linear(e, YVARS) for e in row] for row in A]).det()
        assert C.poly.subs({"y0": 0}) == -(detA.subs({"y0": 0}) ** 2)


def test_restrict_and_tritangent_errors():
    C = det_sextic(diag_net())
    assert restrict_to_line(C, (1, 0, 0)).is_zero()
    with pytest.raises(LineComponentError):
        tritangent_certificate(C, (0, 0, 1))
    with pytest.raises(NetError):
        restrict_to_line(C, (0, 0, 0))


def test_generic_restriction_is_squarefree():
    C = det_sextic(random_net(random.Random(8), -2, 2))
    f = restrict_to_line(C, (1, 2, 3))
    assert f.degree == 6 and f.is_squarefree()


def test_pencil_branch_form():
    res = pencil_branch_form(diag_net(), (1, 0, 0), (0, 1, 1))
    assert res.form == BinaryForm(6, (0, 0, 0, 1, 0, 0, 0))
    assert res.multiplicities == (3, 3)
    gen = pencil_branch_form(random_net(random.Random(8), -2, 2), (1, 0, 0), (0, 1, 0))
    assert gen.multiplicities == (1,) * 6
    with pytest.raises(NetError):
        pencil_branch_form(diag_net(), (1, 2, 3), (2, 4, 6))


def test_pencil_through_rank_four_member_has_double_root():
    # the member at s=1, t=0 has corank 2, so s^2 divides the form... as t^2
    N = LinearFormMatrix.from_poly_matrix(
        [[y1 if i == j and i < 2 else (y0 + y1 * (i - 1) if i == j else Z) for j in range(6)] for i in range(6)]
    )
    res = pencil_branch_form(N, (1, 0, 0), (0, 1, 0))
    assert max(res.multiplicities) >= 2


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_conic_block_nets_are_tritangent(seed):
    C = det_sextic(random_conic_block_net(random.Random(seed)))
    if not restrict_to_line(C, (1, 0, 0)).is_zero():
        assert tritangent_certificate(C, (1, 0, 0))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_congruence_covariance(seed, g):
    G = Mat.from_rows([g[0:3] + [0, 0, 0], g[3:6] + [0, 0, 0], g[6:9] + [0, 0, 0],
                       [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])
    N = random_net(random.Random(seed), -2, 2)
    assert det_sextic(N.congruence(G)).poly == det_sextic(N).poly * (G.det() ** 2)


def test_tritangent_invariant_under_coordinate_change():
    M = [[1, 1, 0], [0, 1, 0], [2, 0, 1]]  # y -> M y
    Minv = Mat.from_rows(M).inverse()
    for seed in range(4):
        N = random_conic_block_net(random.Random(seed))
        N2 = N.substitute(M)
        # y0 = 0 pulls back to the line (row 0 of M) . y = 0
        line = tuple(M[0])
        assert tritangent_certificate(det_sextic(N2), line) == tritangent_certificate(det_sextic(N), (1, 0, 0))
    assert Minv.is_integral()


def test_rank_drops_exactly_on_sextic():
    N = random_net(random.Random(8), -2, 2)
    C = det_sextic(N)
    for p in primitive_points(2):
        assert (rank_at(N, p) <= 5) == (C.poly.evaluate(p) == 0)


def test_singular_scan_six_lines_distinct_points():
    scan = singular_point_scan(six_lines(), 1, (5, 7))
    # three coordinate vertices are triple points, so 15 pairwise meetings collapse to 9 points
    assert scan.points == (
        (0, 0, 1), (0, 1, -1), (0, 1, 0), (1, -1, -1), (1, -1, 0), (1, -1, 1), (1, 0, -1), (1, 0, 0), (1, 1, -1),
    )
    assert scan.reduced is True


def test_singular_scan_general_lines_fifteen_points():
    lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, -3, 2)]
    C = Poly.const(1, YVARS)
    for a, b, c in lines:
        C = C * (y0 * a + y1 * b + y2 * c)
    scan = singular_point_scan(PlaneSextic(C), 13, (101,))
    assert len(scan.points) == 15
    assert scan.fp_counts[101] == 15


def test_singular_scan_fermat_and_nonreduced():
    fermat = singular_point_scan(PlaneSextic(y0**6 + y1**6 + y2**6), 3, (7, 11, 13))
    assert fermat.points == () and all(v == 0 for v in fermat.fp_counts.values())
    nr = singular_point_scan(PlaneSextic(y0**6), 2, (5,))
    assert all(p[0] == 0 for p in nr.points) and len(nr.points) == 8
    assert nr.reduced is None and "non-reduced" in nr.note
    nr3 = singular_point_scan(PlaneSextic(y0**6), 3, (5,))
    assert nr3.reduced is False  # 16 points exceed what a reduced sextic allows
    assert nr.fp_counts[5] == 6


def test_primitive_points_count():
    assert len(primitive_points(1)) == 13
