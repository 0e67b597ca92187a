"""Acceptance criteria 1-15, one test each.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL: ...`` line (outside
pytest's capture) and then asserts the same condition with exact arithmetic.
"""
import json
import random
import shutil
from fractions import Fraction

import pytest

from k3mukai import cli
from k3mukai.exact_algebra import Poly, parse_poly
from k3mukai.fm_solver import PARAMS, assemble, run_branch, vperp_mod_v_basis
from k3mukai.grassmann import BASIS, SchubertClass, cup, degree, spinor_mukai_vector, surface_class
from k3mukai.lattice import (
    FUNDAMENTAL_UNIT,
    LINE_GRAM,
    IntegerLattice,
    apply_matrix,
    check_involution,
    classes_with_square,
    discriminant,
    gram_in_basis,
    orthogonal_ray,
    pair,
    unit_power_classify,
)
from k3mukai.mukai import (
    MukaiVector,
    ci_certificate,
    compactness_certificate,
    fineness_parity_check,
    hilbert_poly,
    is_isotropic,
    is_primitive,
    moduli_dim,
    sigma_min,
    strictly_semistable_split,
)
from k3mukai.quadric_net import (
    YVARS,
    PlaneSextic,
    det_sextic,
    random_conic_block_net,
    random_net,
    restrict_to_line,
    singular_point_scan,
    square_up_to_scalar,
)


@pytest.fixture
def verdict(capsys):
    def report(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return report


def line_lattice():
    return IntegerLattice(LINE_GRAM, ("H", "l"))


def test_01_discriminant(verdict):
    L = line_lattice()
    h, D = L((2, -3)), L((1, -1))
    G = gram_in_basis(L, [h, D], strict=True)
    M = IntegerLattice(G, ("h", "D"))
    ok = discriminant(L) == -17 and G == ((2, 5), (5, 4)) and discriminant(M) == -17
    verdict(1, ok, f"disc={discriminant(L)}, Gram(h,D)={G}, disc'={discriminant(M)}")


def test_02_unit_power_bijection(verdict):
    L = line_lattice()
    found = classes_with_square(L, 2, 30) + classes_with_square(L, -2, 30)
    labels, exceptions = {}, []
    for C in found:
        try:
            labels[unit_power_classify(L, C)] = C
        except Exception as exc:  # any failure to classify counts
            exceptions.append((str(C), str(exc)))
    # converse: every unit power whose class lands in the box was found
    expected = set()
    for n in range(-8, 9):
        u = FUNDAMENTAL_UNIT**n
        for sign in (1, -1):
            a, b = -sign * u.y, sign * u.x  # b - a*sigma = sign * u
            if max(abs(a), abs(b)) <= 30:
                expected.add((sign, n))
    ok = not exceptions and len(labels) == len(found) and set(labels) == expected
    verdict(2, ok, f"{len(found)} classes, {len(labels)} distinct labels, {len(exceptions)} exceptions")


def test_03_involution(verdict):
    L = line_lattice()
    m = ((25, 16), (-39, -25))
    h, D, Dp = L((2, -3)), L((1, -1)), L((9, -14))
    ok = (
        check_involution(L, m)
        and apply_matrix(m, h) == h
        and apply_matrix(m, D) == Dp
        and apply_matrix(m, Dp) == D
        and pair(D, Dp) == 21
    )
    verdict(3, ok, f"m(h)={apply_matrix(m, h)}, m(D)={apply_matrix(m, D)}, D.D'={pair(D, Dp)}")


def test_04_sigma_min(verdict):
    vals = {}
    for name, gram, basis in (
        ("rank one", ((8,),), ("H",)),
        ("line", LINE_GRAM, ("H", "l")),
        ("conic", ((8, 2), (2, -2)), ("H", "C")),
    ):
        L = IntegerLattice(gram, basis)
        vals[name] = sigma_min(L, MukaiVector(2, L.basis("H"), 2))
    verdict(4, vals == {"rank one": 2, "line": 1, "conic": 2}, str(vals))


def test_05_compactness(verdict):
    line = line_lattice()
    conic = IntegerLattice(((8, 2), (2, -2)), ("H", "C"))
    E = IntegerLattice(((0, 4), (4, 0)), ("f1", "f2"))
    HE = E((1, 1))
    c_line = compactness_certificate(line, line.basis("H"))
    c_conic = compactness_certificate(conic, conic.basis("H"))
    c_E = compactness_certificate(E, HE)
    split = strictly_semistable_split(E, HE)
    ok = (
        c_line.verdict == "compact"
        and c_conic.verdict == "compact"
        and c_E.verdict == "witness"
        and c_E.witness == E.basis("f1")
        and split == (E.basis("f1"), E.basis("f2"))
    )
    verdict(5, ok, f"line={c_line.verdict}, conic={c_conic.verdict}, E={c_E.verdict} {c_E.witness}, split={split and tuple(map(str, split))}")


def test_06_complete_intersection(verdict):
    cases = {
        "line": (line_lattice(), (1, 0)),
        "conic": (IntegerLattice(((8, 2), (2, -2)), ("H", "C")), (1, 0)),
        "elliptic pair": (IntegerLattice(((0, 4), (4, 0)), ("f1", "f2")), (1, 1)),
    }
    verdicts = {k: ci_certificate(L, L(H)).verdict for k, (L, H) in cases.items()}
    N = IntegerLattice(((8, 3), (3, 0)), ("H", "E"))
    cert = ci_certificate(N, N.basis("H"))
    w = cert.witness
    ok = (
        all(v == "complete_intersection" for v in verdicts.values())
        and cert.verdict == "witness"
        and w is not None
        and w.square() == 0
        and w.dot(N.basis("H")) == 3
    )
    verdict(6, ok, f"{verdicts}; [[8,3],[3,0]] -> {cert.verdict} {w}")


def test_07_hilbert_polynomials(verdict):
    E = IntegerLattice(((0, 4), (4, 0)), ("f1", "f2"))
    H = E((1, 1))
    l1 = E.basis("f1")
    target = parse_poly("2 + 4*n + 4*n^2", ("n",))
    p = hilbert_poly(MukaiVector(2, H, 2), H)
    q = hilbert_poly(MukaiVector(1, l1, 1), H)
    ok = l1.dot(H) == 4 and p == target and q == target
    verdict(7, ok, f"p(2,H,2)={p}, p(1,l1,1)={q}")


def test_08_schubert(verdict):
    table_ok = True
    # codimension, commutativity and associativity over the whole basis
    elems = [SchubertClass.basis(b) for b in BASIS]
    for a in elems:
        for b in elems:
            table_ok &= cup(a, b) == cup(b, a)
            for c in elems:
                table_ok &= cup(cup(a, b), c) == cup(a, cup(b, c))
    s1, s2, s11 = (SchubertClass.basis(b) for b in ("s1", "s2", "s11"))
    table_ok &= cup(s1, s1) == s2 + s11
    table_ok &= degree(cup(s2, s2)) == 1 and degree(cup(s11, s11)) == 1 and degree(cup(s2, s11)) == 0
    table_ok &= degree(cup(s1, cup(s1, cup(s1, s1)))) == 2
    S = surface_class()
    degs = (degree(cup(S, s11)), degree(cup(S, s2)), degree(cup(S, cup(s1, s1))))
    v = spinor_mukai_vector("S_dual")
    ok = (
        table_ok
        and degs == (4, 4, 8)
        and str(v) == "(2, H, 2)"
        and is_isotropic(v)
        and is_primitive(v)
        and moduli_dim(v) == 2
    )
    verdict(8, ok, f"table={table_ok}, degrees={degs}, v={v}, dim={moduli_dim(v)}")


def test_09_tritangent(verdict):
    rng = random.Random(20240917)
    structured = 0
    for _ in range(50):
        f = restrict_to_line(det_sextic(random_conic_block_net(rng, -3, 3)), (1, 0, 0))
        structured += f.is_zero() or square_up_to_scalar(f) is not None
    squares = 0
    for _ in range(50):
        f = restrict_to_line(det_sextic(random_net(rng, -3, 3)), (1, 0, 0))
        squares += (not f.is_zero()) and square_up_to_scalar(f) is not None
    ok = structured == 50 and squares <= 1
    verdict(9, ok, f"conic-block squares {structured}/50, unstructured squares {squares}/50")


def test_10_fm_pipeline(verdict):
    res = run_branch("positive", 5)
    want_P = [
        ["a", "2 + 2*s", "1 + 2*t", "2"],
        ["b", "-3 + s", "-2 + t", "1"],
        ["c", "6", "4", "0"],
        ["d", "-11 + 2*s", "-7 + 2*t", "2"],
    ]
    P_ok = res.partial.P.tolist() == [[parse_poly(e, PARAMS) for e in row] for row in want_P]
    sys_ = res.system
    rel = sys_.linear_relations
    rel_ok = (
        sys_.det == parse_poly("2*d - 8*b - c + 2*a", PARAMS)
        and rel["c"] == parse_poly("-(2*d - 8*b - c + 2*a - 1)", PARAMS)
        and rel["t"] == parse_poly("21*d + 13*a - 68*b + t - 10", PARAMS)
        and rel["s"] == parse_poly("32*d + 19*a - 102*b + s - 15", PARAMS)
        and sys_.q == parse_poly("-18*d*a + 68*b*d + 68*b*a - 34*b - 136*b^2 - 8*d^2 + 8*d - 8*a^2 + 8*a - 2", PARAMS)
    )
    pt_ok = (1, 0, -1) in res.points
    sol = assemble(sys_, res.partial, {"a": 1, "b": 0, "d": -1})
    A = res.partial.A
    sol_ok = (
        str(sol.vEx) == "(2, -9H+14l, 1)"
        and str(sol.twist_class) == "5H-7l"
        and str(sol.normalized) == "(2, H, 2)"
        and sol.P_num.T() @ A @ sol.P_num == A
        and sol.f_E.is_integral()
    )
    half = assemble(sys_, res.partial, {"a": Fraction(1, 2), "b": 0, "d": 0})
    ok = P_ok and rel_ok and pt_ok and sol_ok and not half.integral
    verdict(10, ok, f"P={P_ok}, relations={rel_ok}, (1,0,-1) found={pt_ok}, solution={sol_ok}, (1/2,0,0) integral={half.integral}")


def test_11_coset_basis(verdict):
    cb = vperp_mod_v_basis()
    L = line_lattice()
    G = gram_in_basis(L, [L((2, -3)), L((1, -1))])
    ok = cb.pairing == ((2, 5), (5, 4)) == G
    verdict(11, ok, f"x={cb.x}, w={cb.w}, Gram={cb.pairing}")


def test_12_parity_obstruction(verdict):
    M = IntegerLattice(((2, 1), (1, -2)), ("h", "G"))
    res = fineness_parity_check(M, M.basis("h"))
    ok = res["verdict"] == "obstructed" and len(res["parities"]) == 4
    verdict(12, ok, f"{res['verdict']} over {len(res['parities'])} parity classes")


def test_13_singular_scan(verdict):
    y0, y1, y2 = (Poly.var(v, YVARS) for v in YVARS)
    six = singular_point_scan(PlaneSextic(y0 * y1 * y2 * (y0 + y1) * (y0 + y2) * (y1 + y2)), 1, (5, 7))
    fermat = singular_point_scan(PlaneSextic(y0**6 + y1**6 + y2**6), 1, (7, 13))
    ok = len(six.points) == 15 and fermat.points == ()
    verdict(13, ok, f"six-line sextic: {len(six.points)} singular points (criterion asks 15); Fermat: {len(fermat.points)}")


def test_14_discrepancy_report(verdict):
    L = line_lattice()
    lp = L((16, -25))
    ray = orthogonal_ray(L, lp, L.basis("H"))
    rep = cli.run_scenario(cli.load_scenario(cli.bundled_dir() / "line.json"))
    notes = {d["claim"]: d for d in rep["discrepancies"]}
    ray_note = [d for d in notes.values() if d["stated"] == [76, -103]]
    count_note = [d for d in notes.values() if d["stated"] == 86]
    ok = (
        str(ray) == "66H-103l"
        and pair(L.basis("l"), lp) == 66
        and len(ray_note) == 1
        and ray_note[0]["computed"] == [66, -103]
        and "76" in ray_note[0]["note"]
        and len(count_note) == 1
        and count_note[0]["computed"] == 66
    )
    verdict(14, ok, f"ray={ray}, l.l'={pair(L.basis('l'), lp)}, notes={len(notes)}")


def test_15_cli_regression(verdict, tmp_path):
    _, code = cli.run_all(cli.bundled_dir())
    for p in cli.bundled_dir().glob("*.json"):
        shutil.copy(p, tmp_path / p.name)
    flipped, total = 0, 0
    for path in sorted(tmp_path.glob("*.json")):
        original = path.read_text()
        data = json.loads(original)
        for key in list(data["expected"]):
            total += 1
            keep = data["expected"][key]["value"]
            data["expected"][key]["value"] = {"corrupted": keep}
            path.write_text(json.dumps(data))
            flipped += cli.run_all(tmp_path)[1] == cli.EXIT_MISMATCH
            data["expected"][key]["value"] = keep
        path.write_text(original)
    ok = code == cli.EXIT_OK and flipped == total > 0
    verdict(15, ok, f"bundled exit={code}; corruptions flipping to 1: {flipped}/{total}")
