"""Command line front end.

Four subcommands:

* ``info``      grid echo plus component and weak class inventory
* ``signs``     canonical sign assignment per weak class, TSV or JSON
* ``homology``  signed integral homology tables per class, or mod 2
* ``verify``    consistency battery, or re-verification of a signs file

Grids come from a file path or an inline one-liner such as
``'N=2; X=1 2; O=2 1'``.  Output is byte stable: JSON uses compact
separators and deterministic ordering throughout, so identical inputs
produce identical bytes.  Exit codes: 0 success, 2 rejected input,
3 a broken internal invariant or a failed verification.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .combinatorics import generators, rectangles_from
from .errors import (
    DSquaredNonzero,
    GridError,
    GridMismatch,
    GridSyntaxError,
    Infeasible,
    ProductNotOne,
    ProjectionViolation,
    StructureViolation,
)
from .grid import GridDiagram, grid_sha, parse_grid
from .homology import (
    HomologyTable,
    build_complex,
    collapse_alexander,
    divide_q_factors,
    homology_f2,
    homology_z,
    poincare,
    table_to_dict,
)
from .oracles import (
    exhaustive_rectangle_census,
    gauge_class_census,
    grading_cross_check,
)
from .signs import (
    SignAssignment,
    WeakClass,
    all_weak_classes,
    canonical_targets,
    component_signs,
    enumerate_sign_assignments,
    hv_profile,
    phi,
    solve_signs,
    verify_sign_assignment,
)

CONTRACT_ERRORS = (
    StructureViolation,
    Infeasible,
    ProjectionViolation,
    ProductNotOne,
    DSquaredNonzero,
)


def _load_grid(arg: str) -> GridDiagram:
    path = Path(arg)
    if path.is_file():
        return parse_grid(path.read_text())
    if "=" in arg:
        return parse_grid(arg)
    raise GridSyntaxError(f"no such grid file: {arg}")


def _parse_class(spec: str, g: GridDiagram) -> list[WeakClass]:
    if spec == "all":
        return all_weak_classes(g)
    tokens = [tok.strip() for tok in spec.split(",")]
    signs = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
    try:
        r = tuple(signs[tok] for tok in tokens)
    except KeyError as exc:
        raise GridSyntaxError(f"bad sign {exc.args[0]!r} in class spec {spec!r}") from None
    l = len(g.components)
    if len(r) != l:
        raise GridSyntaxError(f"class spec has {len(r)} signs, the link has {l} components")
    if math.prod(r) != 1:
        raise GridSyntaxError("component signs must multiply to +1")
    return [WeakClass(r)]


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dumps(doc) -> str:
    return json.dumps(doc, separators=(",", ":")) + "\n"


def _grid_doc(g: GridDiagram) -> dict:
    return {
        "sha": grid_sha(g),
        "n": g.n,
        "x": list(g.x_col),
        "o": list(g.o_col),
        "components": [
            {"id": c.id, "rows": sorted(c.rows), "cols": sorted(c.cols), "m": c.m}
            for c in g.components
        ],
    }


# ---------------------------------------------------------------- info


def _cmd_info(args) -> int:
    g = _load_grid(args.grid)
    doc = {
        "grid": _grid_doc(g),
        "generators": math.factorial(g.n),
        "weak_classes": [list(w.r) for w in all_weak_classes(g)],
    }
    _emit(_dumps(doc), args.output)
    return 0


# ---------------------------------------------------------------- signs


def _solve_class(g: GridDiagram, weak: WeakClass) -> dict:
    target = canonical_targets(g, weak)
    s = solve_signs(g, target)
    prof = hv_profile(s, check=False)
    if prof != target:
        raise Infeasible("solved assignment does not meet its target profile")
    rvec = component_signs(s)
    if rvec.r != weak.r:
        raise ProductNotOne("solved assignment lands in the wrong weak class")
    return {
        "r": list(weak.r),
        "phi": list(phi(s)),
        "h": list(prof.h),
        "v": list(prof.v),
        "assignment": s,
    }


def _signs_rows(s: SignAssignment) -> list[tuple]:
    rows = [
        (r.source, r.rows, int(r.row_wrap), val) for r, val in s.values.items()
    ]
    rows.sort()
    return rows


def _signs_tsv(g: GridDiagram, sections: list[dict]) -> str:
    lines = []
    for sec in sections:
        header = {
            "grid_sha": grid_sha(g),
            "n": g.n,
            "r": sec["r"],
            "phi": sec["phi"],
            "h": sec["h"],
            "v": sec["v"],
            "rectangles": len(sec["assignment"].values),
        }
        lines.append("# " + json.dumps(header, separators=(",", ":")))
        lines.append("# source\trows\trow_wrap\tsign")
        for source, rows, wrap, val in _signs_rows(sec["assignment"]):
            lines.append(
                "\t".join(
                    (
                        ",".join(map(str, source)),
                        ",".join(map(str, rows)),
                        str(wrap),
                        f"{val:+d}",
                    )
                )
            )
    return "\n".join(lines) + "\n"


def _signs_json(g: GridDiagram, sections: list[dict]) -> str:
    doc = {
        "grid_sha": grid_sha(g),
        "n": g.n,
        "classes": [
            {
                "r": sec["r"],
                "phi": sec["phi"],
                "h": sec["h"],
                "v": sec["v"],
                "signs": [
                    [list(source), list(rows), wrap, val]
                    for source, rows, wrap, val in _signs_rows(sec["assignment"])
                ],
            }
            for sec in sections
        ],
    }
    return _dumps(doc)


def _cmd_signs(args) -> int:
    g = _load_grid(args.grid)
    sections = [_solve_class(g, w) for w in _parse_class(args.wclass, g)]
    text = (
        _signs_json(g, sections) if args.format == "json" else _signs_tsv(g, sections)
    )
    _emit(text, args.output)
    return 0


def _read_signs_file(text: str) -> list[dict]:
    """Sections of a signs file, each {'header': dict, 'rows': list}.
    Accepts both the TSV and the JSON form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        return [
            {
                "header": {
                    "grid_sha": doc.get("grid_sha"),
                    "n": doc.get("n"),
                    "r": sec.get("r"),
                    "phi": sec.get("phi"),
                    "h": sec.get("h"),
                    "v": sec.get("v"),
                },
                "rows": [
                    (tuple(source), tuple(rows), int(wrap), int(val))
                    for source, rows, wrap, val in sec["signs"]
                ],
            }
            for sec in doc["classes"]
        ]
    sections: list[dict] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("{"):
                sections.append({"header": json.loads(body), "rows": []})
            continue
        if not sections:
            raise GridSyntaxError("signs data before any header line")
        fields = line.split("\t")
        if len(fields) != 4:
            raise GridSyntaxError(f"expected 4 tab-separated fields, got {line!r}")
        source = tuple(int(t) for t in fields[0].split(","))
        rows = tuple(int(t) for t in fields[1].split(","))
        sections[-1]["rows"].append((source, rows, int(fields[2]), int(fields[3])))
    if not sections:
        raise GridSyntaxError("signs file holds no sections")
    return sections


def _assignment_from_rows(g: GridDiagram, rows: list[tuple]) -> SignAssignment:
    by_key = {
        (r.source, r.rows, r.row_wrap): r
        for x in generators(g)
        for r in rectangles_from(g, x)
    }
    values = {}
    for source, rowpair, wrap, val in rows:
        rect = by_key.get((source, rowpair, bool(wrap)))
        if rect is None:
            raise GridMismatch(
                f"signs file names a rectangle this grid does not have: "
                f"{source} rows {rowpair} wrap {wrap}"
            )
        if val not in (1, -1):
            raise GridSyntaxError(f"sign must be +1 or -1, got {val}")
        values[rect] = val
    return SignAssignment(g, values)


# ---------------------------------------------------------------- homology


def _poincare_list(p) -> list:
    return [[m, list(a2), coeff] for (m, a2), coeff in sorted(p.terms.items()) if coeff]


def _table_doc(g: GridDiagram, table: HomologyTable, weak: WeakClass | None, args) -> dict:
    shown = collapse_alexander(table) if args.collapse_alexander else table
    doc = table_to_dict(shown, None if weak is None else weak.r)
    series = poincare(table)
    doc["poincare"] = _poincare_list(series)
    if args.divide_q:
        quotient = divide_q_factors(series, g)
        doc["poincare_divided"] = None if quotient is None else _poincare_list(quotient)
    return doc


def _cmd_homology(args) -> int:
    g = _load_grid(args.grid)
    if args.ring == "f2":
        tables = [(None, homology_f2(g))]
    else:
        classes = _parse_class(args.wclass, g)

        def table_for(weak: WeakClass) -> tuple[WeakClass, HomologyTable]:
            s = solve_signs(g, canonical_targets(g, weak))
            return weak, homology_z(build_complex(g, s))

        if args.jobs > 1 and len(classes) > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                tables = list(pool.map(table_for, classes))
        else:
            tables = [table_for(w) for w in classes]
    doc = {
        "grid": _grid_doc(g),
        "ring": args.ring,
        "collapsed": args.collapse_alexander,
        "tables": [_table_doc(g, t, w, args) for w, t in tables],
    }
    _emit(_dumps(doc), args.output)
    return 0


# ---------------------------------------------------------------- verify


def _uct_compare(tables_z: list[HomologyTable], table_f2: HomologyTable) -> int:
    """Mod-2 dimensions forced by an integral table: free rank plus even
    torsion in this degree and one degree below.  Returns dims compared."""
    f2 = {(grp.a2, grp.m): grp.free for grp in table_f2.groups}
    compared = 0
    for table in tables_z:
        by_deg = {(grp.a2, grp.m): grp for grp in table.groups}
        degrees = {(a2, m) for a2, m in set(f2) | set(by_deg)}
        degrees |= {(a2, m + 1) for a2, m in by_deg}
        for a2, m in degrees:
            grp = by_deg.get((a2, m))
            below = by_deg.get((a2, m - 1))
            want = (
                (grp.free if grp else 0)
                + sum(1 for t in (grp.torsion if grp else ()) if t % 2 == 0)
                + sum(1 for t in (below.torsion if below else ()) if t % 2 == 0)
            )
            got = f2.get((a2, m), 0)
            if want != got:
                raise AssertionError(
                    f"mod-2 dimension at a2={a2} m={m}: integral table forces "
                    f"{want}, direct computation gives {got}"
                )
            compared += 1
    return compared


def _battery(g: GridDiagram, suite: str) -> list[dict]:
    checks: list[dict] = []

    def run(name: str, fn) -> None:
        t0 = time.perf_counter()
        try:
            detail = fn()
            ok = True
        except (GridError, AssertionError) as exc:
            detail = str(exc)
            ok = False
        checks.append(
            {
                "name": name,
                "ok": ok,
                "seconds": round(time.perf_counter() - t0, 3),
                "detail": detail,
            }
        )

    tables_z: list[HomologyTable] = []

    def signed_complexes() -> str:
        total = 0
        for weak in all_weak_classes(g):
            s = solve_signs(g, canonical_targets(g, weak))
            table = homology_z(build_complex(g, s))
            tables_z.append(table)
            total += table.total_rank()
        return f"{len(tables_z)} classes, boundary squares to zero, total rank {total}"

    run("signed_complexes", signed_complexes)

    def mod2() -> str:
        table_f2 = homology_f2(g)
        compared = _uct_compare(tables_z, table_f2)
        return f"rank {table_f2.total_rank()}, {compared} dimensions consistent"

    run("mod2_cross_check", mod2)

    if suite == "full":
        def assignments() -> str:
            bad = 0
            for weak in all_weak_classes(g):
                s = solve_signs(g, canonical_targets(g, weak))
                report = verify_sign_assignment(s)
                bad += len(report.violations)
            if bad:
                raise AssertionError(f"{bad} sign relation violations")
            return "square relations and annulus products hold everywhere"

        run("sign_relations", assignments)

        if g.n <= 5:
            run(
                "rectangle_census",
                lambda: f"{exhaustive_rectangle_census(g)} rectangles match",
            )
        if g.n <= 3:
            def census() -> str:
                slow = gauge_class_census(g)
                fast = enumerate_sign_assignments(g)
                if (slow[0], slow[1]) != fast:
                    raise AssertionError(
                        f"census disagreement: enumeration {slow[:2]}, elimination {fast}"
                    )
                return f"{fast[0]} solutions in {fast[1]} gauge classes"

            run("gauge_census", census)
        if g.n <= 4:
            run(
                "grading_paths",
                lambda: f"{grading_cross_check(g, pairs=12, seed=0)} generator pairs consistent",
            )
    return checks


def _cmd_verify(args) -> int:
    g = _load_grid(args.grid)
    if args.signs:
        text = Path(args.signs).read_text()
        sections = _read_signs_file(text)
        checks = []
        for idx, sec in enumerate(sections):
            header = sec["header"]
            claimed_sha = header.get("grid_sha")
            if claimed_sha and claimed_sha != grid_sha(g):
                raise GridMismatch("signs file was written for a different grid")
            s = _assignment_from_rows(g, sec["rows"])
            report = verify_sign_assignment(s)
            ok = report.ok
            detail = "all relations hold" if ok else "; ".join(report.violations[:5])
            if ok:
                measured_phi = list(phi(s))
                measured_r = list(component_signs(s).r)
                for field, measured in (("phi", measured_phi), ("r", measured_r)):
                    claimed = header.get(field)
                    if claimed is not None and claimed != measured:
                        ok = False
                        detail = f"{field} is {measured}, file claims {claimed}"
            checks.append({"name": f"section_{idx}", "ok": ok, "detail": detail})
    else:
        checks = _battery(g, args.suite)
    ok = all(c["ok"] for c in checks)
    doc = {"grid_sha": grid_sha(g), "ok": ok, "checks": checks}
    _emit(_dumps(doc), args.output)
    return 0 if ok else 3


# ---------------------------------------------------------------- driver


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridsigns",
        description="Sign assignments and signed grid homology over the integers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("grid", help="grid file path or inline text like 'N=2; X=1 2; O=2 1'")
        p.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")

    p_info = sub.add_parser("info", help="grid summary as JSON")
    add_common(p_info)
    p_info.set_defaults(func=_cmd_info)

    p_signs = sub.add_parser("signs", help="solve canonical sign assignments")
    add_common(p_signs)
    p_signs.add_argument(
        "--class",
        dest="wclass",
        default="all",
        help="weak class as comma signs, e.g. '+,-', or 'all' (default); "
        "labels starting with '-' need the --class=-,+ form",
    )
    p_signs.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p_signs.set_defaults(func=_cmd_signs)

    p_hom = sub.add_parser("homology", help="homology tables as JSON")
    add_common(p_hom)
    p_hom.add_argument("--class", dest="wclass", default="all")
    p_hom.add_argument("--ring", choices=("z", "f2"), default="z")
    p_hom.add_argument(
        "--collapse-alexander",
        action="store_true",
        help="merge the multi-degree to its total",
    )
    p_hom.add_argument(
        "--divide-q",
        action="store_true",
        help="also report the series divided by its multiplicity factors",
    )
    p_hom.add_argument("--jobs", type=int, default=1, help="classes to solve in parallel")
    p_hom.set_defaults(func=_cmd_homology)

    p_ver = sub.add_parser("verify", help="consistency battery, or re-check a signs file")
    add_common(p_ver)
    p_ver.add_argument("--suite", choices=("quick", "full"), default="quick")
    p_ver.add_argument("--signs", default=None, help="signs file to re-verify")
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CONTRACT_ERRORS as exc:
        print(f"gridsigns: internal contract violated: {exc}", file=sys.stderr)
        return 3
    except GridError as exc:
        print(f"gridsigns: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gridsigns: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
