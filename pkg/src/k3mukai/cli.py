"""Scenario runner: ``python -m k3mukai --scenario file.json`` or ``--all dir``.

Exit codes: 0 success, 1 expectation mismatch, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from . import fm_solver, grassmann
from .lattice import (
    DivisorClass,
    IntegerLattice,
    LatticeError,
    apply_matrix,
    check_involution,
    discriminant,
    effective_cone_rays,
    nef_cone_rays,
    orthogonal_ray,
)
from .mukai import (
    MukaiVector,
    ci_certificate,
    compactness_certificate,
    fineness_parity_check,
    moduli_dim,
    sigma_min,
    strictly_semistable_split,
)
from .quadric_net import (
    LineComponentError,
    LinearFormMatrix,
    NetError,
    build_conic_block_net,
    det_sextic,
    singular_point_scan,
    tritangent_certificate,
)

SCHEMA = 1
EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class ScenarioError(ValueError):
    """Malformed scenario; the message starts with the offending field path."""


def bundled_dir() -> Path:
    return Path(str(resources.files("k3mukai") / "scenarios"))


# ---------------------------------------------------------------------------
# loading


@dataclass
class Scenario:
    name: str
    lattice: IntegerLattice
    polarization: DivisorClass
    classes: dict = field(default_factory=dict)
    net: Optional[LinearFormMatrix] = None
    lines: list = field(default_factory=list)
    scan: dict = field(default_factory=dict)
    parity: Optional[dict] = None
    involution: Optional[list] = None
    fm: Optional[dict] = None
    stated: list = field(default_factory=list)
    expected: dict = field(default_factory=dict)
    source: str = ""


def _need(obj: dict, key: str, path: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ScenarioError(f"{path}.{key}: missing" if path else f"{key}: missing")
    return obj[key]


def _lattice(obj, path: str) -> IntegerLattice:
    try:
        return IntegerLattice.from_json(obj)
    except (LatticeError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def _class(L: IntegerLattice, obj, path: str) -> DivisorClass:
    if not isinstance(obj, list) or len(obj) != L.rank or not all(isinstance(c, int) for c in obj):
        raise ScenarioError(f"{path}: expected {L.rank} integers, got {obj!r}")
    return L(tuple(obj))


def _net(obj, path: str) -> LinearFormMatrix:
    try:
        if "conic_block" in obj:
            cb = obj["conic_block"]
            return build_conic_block_net(
                [[tuple(e) for e in row] for row in _need(cb, "A", path + ".conic_block")],
                [[tuple(e) for e in row] for row in _need(cb, "D", path + ".conic_block")],
            )
        return LinearFormMatrix.from_json(obj)
    except (NetError, TypeError, ValueError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def parse_scenario(obj: dict, source: str = "") -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError("scenario: top level must be an object")
    if obj.get("schema", SCHEMA) != SCHEMA:
        raise ScenarioError(f"schema: unsupported version {obj.get('schema')!r}")
    name = _need(obj, "name", "")
    L = _lattice(_need(obj, "lattice", ""), "lattice")
    H = _class(L, _need(obj, "polarization", ""), "polarization")
    if H.square() <= 0:
        raise ScenarioError(f"polarization: H^2 = {H.square()} must be positive")
    classes = {k: _class(L, v, f"classes.{k}") for k, v in obj.get("classes", {}).items()}
    net = _net(obj["net"], "net") if "net" in obj else None
    parity = None
    if "parity" in obj:
        p = obj["parity"]
        PL = _lattice(_need(p, "lattice", "parity"), "parity.lattice")
        parity = {"lattice": PL, "degree_class": _class(PL, _need(p, "degree_class", "parity"), "parity.degree_class")}
    expected = obj.get("expected", {})
    for k, v in expected.items():
        if not isinstance(v, dict) or "value" not in v or "source" not in v:
            raise ScenarioError(f"expected.{k}: needs 'value' and 'source'")
    return Scenario(
        name=name,
        lattice=L,
        polarization=H,
        classes=classes,
        net=net,
        lines=obj.get("lines", []),
        scan=obj.get("scan", {}),
        parity=parity,
        involution=obj.get("involution"),
        fm=obj.get("fm"),
        stated=obj.get("stated", []),
        expected=expected,
        source=source,
    )


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: malformed JSON: {exc}") from exc
    return parse_scenario(obj, str(path))


# ---------------------------------------------------------------------------
# running


def _cls(c: DivisorClass) -> list:
    return [x if isinstance(x, int) else str(x) for x in c.coords]


def _lookup(report: dict, path: str):
    cur = report
    for part in path.split("."):
        if isinstance(cur, dict) and part in cur:
            cur = cur[part]
        elif isinstance(cur, list) and part.isdigit() and int(part) < len(cur):
            cur = cur[int(part)]
        else:
            raise KeyError(path)
    return cur


def _stated_claims(s: Scenario, report: dict) -> list:
    out = []
    for claim in s.stated:
        path = claim["computed"]
        try:
            computed = _lookup(report, path)
        except KeyError:
            computed = None
        agrees = computed == claim["value"]
        entry = {"claim": claim["claim"], "stated": claim["value"], "computed": computed, "agrees": agrees}
        if not agrees:
            entry["note"] = f"stated value {claim['value']} disagrees with computed {computed}"
        out.append(entry)
    return out


def run_scenario(s: Scenario, height: int = 30, branch: Optional[str] = None) -> dict:
    L, H = s.lattice, s.polarization
    v = MukaiVector(2, H, 2)
    sm = sigma_min(L, v)
    report: dict = {
        "schema": SCHEMA,
        "scenario": s.name,
        "lattice": L.to_json(),
        "polarization": _cls(H),
        "discriminant": discriminant(L),
        "v": str(v),
        "moduli_dim": moduli_dim(v),
        "sigma_min": sm,
        "fine": sm == 1,
    }
    if L.rank <= 2:
        report["compactness"] = compactness_certificate(L, H).to_json()
        report["complete_intersection"] = ci_certificate(L, H).to_json()
        split = strictly_semistable_split(L, H)
        report["semistable_split"] = [_cls(split[0]), _cls(split[1])] if split else None
    if L.rank == 2:
        eff = effective_cone_rays(L, H, height)
        nef = nef_cone_rays(L, H, height)
        report["cones"] = {
            "height": height,
            "effective_rays": [_cls(r) for r in eff.rays],
            "effective_rays_str": [str(r) for r in eff.rays],
            "ample_boundary": [_cls(r) for r in nef.rays],
            "ample_boundary_str": [str(r) for r in nef.rays],
            "note": eff.note,
        }
    if s.classes:
        names = sorted(s.classes)
        report["classes"] = {k: _cls(s.classes[k]) for k in names}
        report["pairings"] = {
            f"{a}|{b}": s.classes[a].dot(s.classes[b]) for i, a in enumerate(names) for b in names[i:]
        }
        report["orthogonal_rays"] = {k: str(orthogonal_ray(L, s.classes[k], H)) for k in names if L.rank == 2}
    if s.involution is not None:
        m = s.involution
        inv = {"matrix": m, "is_involution": check_involution(L, m)}
        inv["images"] = {k: str(apply_matrix(m, c)) for k, c in sorted(s.classes.items())}
        report["involution"] = inv
    if s.parity is not None:
        report["parity"] = fineness_parity_check(s.parity["lattice"], s.parity["degree_class"])
    if s.name in ("generic",) or L.rank == 1:
        sv = grassmann.spinor_mukai_vector("S_dual", L)
        report["spinor"] = {"S_dual": str(sv), "F": str(grassmann.spinor_mukai_vector("F", L))}
    if s.net is not None:
        report["net"] = _net_report(s)
    if s.fm is not None:
        report["fm"] = _fm_report(s, branch)
    report["stated_claims"] = _stated_claims(s, report)
    report["discrepancies"] = [c for c in report["stated_claims"] if not c["agrees"]]
    report["expectations"] = _check_expected(s, report)
    report["ok"] = all(e["ok"] for e in report["expectations"])
    return report


def _net_report(s: Scenario) -> dict:
    C = det_sextic(s.net)
    out = {"det_sextic": str(C), "degenerate": C.degenerate, "lines": []}
    for line in s.lines:
        try:
            tri = tritangent_certificate(C, line)
            out["lines"].append({"line": line, "tritangent": tri})
        except LineComponentError:
            out["lines"].append({"line": line, "tritangent": None, "component": True})
    if not C.poly.is_zero():
        scan = singular_point_scan(C, int(s.scan.get("height", 1)), tuple(s.scan.get("primes", (5, 7))))
        out["singular_scan"] = scan.to_json()
    return out


def _fm_report(s: Scenario, branch: Optional[str]) -> dict:
    if s.lattice.gram != ((8, 1), (1, -2)):
        raise ScenarioError("fm: the transform computation needs the (H, l) lattice [[8,1],[1,-2]]")
    br = branch or s.fm.get("branch", "positive")
    res = fm_solver.run_branch(br, int(s.fm.get("height", 5)), s.lattice)
    cb = fm_solver.vperp_mod_v_basis(fm_solver.standard_v(s.lattice))
    integral = [sol for sol in res.solutions if sol.integral]
    out = {
        "branch": br,
        "coset_basis": cb.to_json(),
        "P": res.partial.to_json()["P"],
        "system": res.system.to_json(),
        "height": int(s.fm.get("height", 5)),
        "points": [[str(c) for c in p] for p in res.points],
        "integral_points": [[str(c) for c in sol.point.values()] for sol in integral],
        "all_checks_pass": all(r["passed"] for r in res.reports),
        "all_normalize": all(str(sol.normalized) == str(fm_solver.standard_v(s.lattice)) for sol in res.solutions),
        "solutions": {},
    }
    for sol, rep in zip(res.solutions, res.reports):
        key = ",".join(str(sol.point[k]) for k in ("a", "b", "d") if k in sol.point)
        out["solutions"][key] = {**sol.to_json(), "checks": rep}
    return out


def _check_expected(s: Scenario, report: dict) -> list:
    out = []
    for key, want in sorted(s.expected.items()):
        try:
            actual = _lookup(report, key)
        except KeyError:
            actual = "<missing>"
        out.append({"field": key, "expected": want["value"], "actual": actual, "ok": actual == want["value"], "source": want["source"]})
    return out


# ---------------------------------------------------------------------------
# output


def render_text(report: dict) -> str:
    """Plain rendering of the same JSON report."""
    lines = []

    def walk(obj, prefix):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(v, f"{prefix}.{k}" if prefix else str(k))
        elif isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
            for i, x in enumerate(obj):
                walk(x, f"{prefix}[{i}]")
        else:
            lines.append(f"{prefix}: {json.dumps(obj)}")

    walk(report, "")
    return "\n".join(lines)


def dump(report: dict, fmt: str) -> str:
    if fmt == "text":
        return render_text(report)
    return json.dumps(report, indent=2, sort_keys=False)


def run_all(directory, height: int = 30, branch: Optional[str] = None) -> tuple[dict, int]:
    directory = Path(directory)
    if not directory.is_dir():
        raise ScenarioError(f"{directory}: not a directory")
    rows, code = [], EXIT_OK
    for path in sorted(directory.glob("*.json")):
        try:
            rep = run_scenario(load_scenario(path), height, branch)
        except ScenarioError as exc:
            rows.append({"file": path.name, "scenario": None, "status": "error", "error": str(exc)})
            code = EXIT_INPUT
            continue
        bad = [e for e in rep["expectations"] if not e["ok"]]
        rows.append(
            {
                "file": path.name,
                "scenario": rep["scenario"],
                "status": "ok" if not bad else "mismatch",
                "checked": len(rep["expectations"]),
                "mismatches": bad,
                "discrepancies": rep["discrepancies"],
            }
        )
        if bad and code == EXIT_OK:
            code = EXIT_MISMATCH
    return {"schema": SCHEMA, "directory": str(directory), "rows": rows}, code


def render_summary_text(summary: dict) -> str:
    out = [f"{'file':<22} {'scenario':<12} {'status':<9} checked"]
    for r in summary["rows"]:
        out.append(f"{r['file']:<22} {str(r['scenario']):<12} {r['status']:<9} {r.get('checked', '-')}")
        for m in r.get("mismatches", []):
            out.append(f"    {m['field']}: expected {json.dumps(m['expected'])}, got {json.dumps(m['actual'])}")
        if "error" in r:
            out.append(f"    {r['error']}")
    return "\n".join(out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3mukai", description="Run lattice, Mukai vector and net certificates on scenario files.")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--scenario", help="scenario JSON file, or the name of a bundled scenario")
    g.add_argument("--all", nargs="?", const="", metavar="DIR", help="run every scenario in DIR (default: the bundled set)")
    p.add_argument("--height", type=int, default=30, help="search bound for class enumeration (default 30)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--branch", choices=("positive", "negative", "second"), help="sign branch for the transform")
    return p


def _scenario_path(arg: str) -> Path:
    path = Path(arg)
    if path.exists():
        return path
    bundled = bundled_dir() / f"{arg}.json"
    return bundled if bundled.exists() else path


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.height < 0:
        print("error: --height must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.all is not None:
            summary, code = run_all(args.all or bundled_dir(), args.height, args.branch)
            print(render_summary_text(summary) if args.format == "text" else json.dumps(summary, indent=2))
            return code
        report = run_scenario(load_scenario(_scenario_path(args.scenario)), args.height, args.branch)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(dump(report, args.format))
    return EXIT_OK if report["ok"] else EXIT_MISMATCH


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
