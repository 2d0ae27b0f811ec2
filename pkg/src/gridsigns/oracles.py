"""Slow, definition-level cross-checks for the fast combinatorial paths.

Everything here trades speed for independence: rectangles are rebuilt
by listing their cells one by one, sign-assignment counts come from a
backtracking search over raw square relations instead of linear
algebra, and grading formulas are checked against telescoped
differences along randomized rectangle paths.  The functions raise
``AssertionError`` with a description on the first mismatch and return
a count of how many facts they checked, so a passing run is evidence
proportional to its runtime.  Intended for small grids only.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .combinatorics import (
    Perm,
    Rectangle,
    generators,
    make_rectangle,
    rectangles_from,
    relative_gradings,
    absolute_gradings,
)
from .errors import SizeLimit
from .grid import GridDiagram

__all__ = [
    "exhaustive_rectangle_census",
    "gauge_class_census",
    "grading_cross_check",
    "random_rectangle_path",
]


@dataclass(frozen=True)
class _Candidate:
    """A rectangle re-derived cell by cell, or the reason it is not one."""

    valid: bool
    col_start: int = 0
    col_len: int = 0
    dest: Perm = ()
    nx: int = 0
    no: int = 0
    nx_comp: tuple[int, ...] = ()
    no_comp: tuple[int, ...] = ()


def _census_candidate(
    g: GridDiagram, source: Perm, rows: tuple[int, int], row_wrap: bool
) -> _Candidate:
    n = g.n
    a, b = rows
    bottom, top = (b, a + n) if row_wrap else (a, b)
    cell_rows = [(bottom - 1 + k) % n + 1 for k in range(top - bottom)]
    left = source[(bottom - 1) % n]
    right = source[(top - 1) % n]
    width = (right - left) % n
    cell_cols = [(left - 1 + k) % n + 1 for k in range(width)]
    inner_cols = set(cell_cols[1:])
    for r in cell_rows[1:]:
        if source[r - 1] in inner_cols:
            return _Candidate(False)
    dest = list(source)
    dest[a - 1], dest[b - 1] = source[b - 1], source[a - 1]
    nx = no = 0
    nxc = [0] * len(g.components)
    noc = [0] * len(g.components)
    for r in cell_rows:
        comp = g.component_of_row[r - 1] - 1
        for c in cell_cols:
            if g.x_col[r - 1] == c:
                nx += 1
                nxc[comp] += 1
            if g.o_col[r - 1] == c:
                no += 1
                noc[comp] += 1
    return _Candidate(
        True, left, width, tuple(dest), nx, no, tuple(nxc), tuple(noc)
    )


def exhaustive_rectangle_census(g: GridDiagram) -> int:
    """Rebuild every rectangle of every generator from scratch and
    compare against ``rectangles_from``.  Returns the number compared."""
    if g.n > 5:
        raise SizeLimit("rectangle census is exhaustive, keep the index at 5 or below")
    checked = 0
    for source in generators(g):
        fast = {(r.rows, r.row_wrap): r for r in rectangles_from(g, source)}
        valid_keys = set()
        for rows in itertools.combinations(range(1, g.n + 1), 2):
            for wrap in (False, True):
                cand = _census_candidate(g, source, rows, wrap)
                rect = fast.get((rows, wrap))
                if not cand.valid:
                    if rect is not None:
                        raise AssertionError(
                            f"fast path keeps a blocked rectangle {rect.key}"
                        )
                    continue
                if rect is None:
                    raise AssertionError(
                        f"fast path drops a rectangle at {source} rows {rows} wrap {wrap}"
                    )
                got = (
                    rect.col_start,
                    rect.col_len,
                    rect.dest,
                    rect.nx,
                    rect.no,
                    rect.nx_comp,
                    rect.no_comp,
                )
                want = (
                    cand.col_start,
                    cand.col_len,
                    cand.dest,
                    cand.nx,
                    cand.no,
                    cand.nx_comp,
                    cand.no_comp,
                )
                if got != want:
                    raise AssertionError(
                        f"rectangle data disagrees at {rect.key}: {got} vs {want}"
                    )
                if rect.col_wrap != (cand.col_start + cand.col_len > g.n):
                    raise AssertionError(f"column wrap flag wrong at {rect.key}")
                valid_keys.add((rows, wrap))
                checked += 1
        if set(fast) != valid_keys:
            raise AssertionError(f"rectangle sets differ at source {source}")
    return checked


def _square_relations(
    g: GridDiagram, gens: list[Perm], var_of: dict
) -> list[tuple[int, ...]]:
    """Product-minus-one constraints among rectangle variables, found by
    grouping two-step compositions by endpoints and total cell multiset."""
    groups: dict[tuple, list[tuple[int, int]]] = {}
    for x in gens:
        for r1 in rectangles_from(g, x):
            for r2 in rectangles_from(g, r1.dest):
                cells = tuple(sorted(list(r1.cells(g.n)) + list(r2.cells(g.n))))
                key = (x, r2.dest, cells)
                groups.setdefault(key, []).append((var_of[r1.key], var_of[r2.key]))
    relations = []
    for (x, z, cells), decomps in groups.items():
        if z == x:
            if len(decomps) != 1:
                raise AssertionError(
                    f"a closed two-step domain at {x} has {len(decomps)} decompositions"
                )
            rows = {r for r, _ in cells}
            cols = {c for _, c in cells}
            if not (
                (len(rows) == 1 and len(cells) == g.n)
                or (len(cols) == 1 and len(cells) == g.n)
            ):
                raise AssertionError(f"closed domain at {x} is not a single annulus")
            continue
        if len(decomps) != 2:
            raise AssertionError(
                f"open two-step domain {x} -> {z} has {len(decomps)} decompositions"
            )
        (a, b), (c, d) = decomps
        members = (a, b, c, d)
        if len(set(members)) != 4:
            raise AssertionError(f"decompositions of {x} -> {z} share a rectangle")
        relations.append(members)
    # the two orders of one pair produce the same 4-set; keep one copy
    return sorted(set(tuple(sorted(rel)) for rel in relations))


def _solve_relations(nvar: int, relations: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """All {+1,-1} vectors whose product over every relation is -1,
    by depth-first search with forced-value propagation."""
    watch: list[list[int]] = [[] for _ in range(nvar)]
    for idx, rel in enumerate(relations):
        for v in rel:
            watch[v].append(idx)
    values = [0] * nvar
    out: list[tuple[int, ...]] = []

    def inspect(rel: tuple[int, ...]) -> tuple[bool, tuple[int, int] | None]:
        prod = 1
        free = None
        for v in rel:
            if values[v] == 0:
                if free is not None:
                    return True, None
                free = v
            else:
                prod *= values[v]
        if free is None:
            return prod == -1, None
        return True, (free, -prod)

    def assign(v: int, sign: int, trail: list[int]) -> bool:
        values[v] = sign
        trail.append(v)
        queue = [v]
        while queue:
            w = queue.pop()
            for idx in watch[w]:
                ok, forced = inspect(relations[idx])
                if not ok:
                    return False
                if forced is not None:
                    fv, fs = forced
                    if values[fv] == 0:
                        values[fv] = fs
                        trail.append(fv)
                        queue.append(fv)
                    elif values[fv] != fs:
                        return False
        return True

    def search() -> None:
        v = next((i for i in range(nvar) if values[i] == 0), None)
        if v is None:
            out.append(tuple(values))
            return
        for sign in (1, -1):
            trail: list[int] = []
            if assign(v, sign, trail):
                search()
            for w in trail:
                values[w] = 0

    search()
    return out


def gauge_class_census(
    g: GridDiagram,
) -> tuple[int, int, list[dict[tuple[Perm, tuple[int, int], bool], int]]]:
    """Count raw square-relation solutions and their gauge orbits by
    explicit enumeration.  Returns (solutions, orbits, one representative
    per orbit keyed by (source, rows, row_wrap))."""
    if g.n > 3:
        raise SizeLimit("gauge census enumerates every solution, keep the index at 3 or below")
    gens = list(generators(g))
    gen_index = {p: i for i, p in enumerate(gens)}
    rects: list[Rectangle] = [r for x in gens for r in rectangles_from(g, x)]
    var_of = {r.key: i for i, r in enumerate(rects)}
    ends = [(gen_index[r.source], gen_index[r.dest]) for r in rects]
    relations = _square_relations(g, gens, var_of)
    sols = _solve_relations(len(rects), relations)
    seen: set[tuple[int, ...]] = set()
    reps: list[tuple[int, ...]] = []
    for sol in sols:
        if sol in seen:
            continue
        reps.append(sol)
        orbit = set()
        for t in itertools.product((1, -1), repeat=len(gens)):
            orbit.add(tuple(t[a] * t[b] * v for (a, b), v in zip(ends, sol)))
        seen |= orbit
        if len(orbit) != 2 ** (len(gens) - 1):
            raise AssertionError(f"gauge orbit has unexpected size {len(orbit)}")
    if len(seen) != len(sols) or len(sols) % len(reps):
        raise AssertionError("gauge orbits do not partition the solution set")
    rep_dicts = [
        {(r.source, r.rows, r.row_wrap): v for r, v in zip(rects, sol)} for sol in reps
    ]
    return len(sols), len(reps), rep_dicts


def random_rectangle_path(
    g: GridDiagram, x: Perm, y: Perm, rng: random.Random, detour: int = 3
) -> list[Rectangle]:
    """A randomized chain of forward rectangle moves from x to y: an
    optional warm-up wander, then adjacent-row swaps that sort the rest."""

    def step(cur: Perm, rows: tuple[int, int]) -> Rectangle:
        options = [
            m for w in (False, True) if (m := make_rectangle(g, cur, rows, w))
        ]
        return rng.choice(options)

    path: list[Rectangle] = []
    cur = x
    if g.n >= 2:
        for _ in range(rng.randrange(detour + 1)):
            i = rng.randrange(1, g.n)
            rect = step(cur, (i, i + 1))
            path.append(rect)
            cur = rect.dest
    while cur != y:
        r = next(i for i in range(g.n) if cur[i] != y[i])
        rr = cur.index(y[r], r + 1)
        while rr > r:
            rect = step(cur, (rr, rr + 1))
            path.append(rect)
            cur = rect.dest
            rr -= 1
    return path


def grading_cross_check(
    g: GridDiagram, *, pairs: int = 10, paths_per_pair: int = 3, seed: int = 0
) -> int:
    """Check absolute grading differences against telescoped per-step
    deltas over randomized rectangle paths, and against the relative
    grading fast path.  Returns the number of pairs checked."""
    rng = random.Random(seed)
    gens = list(generators(g))
    for _ in range(pairs):
        x = rng.choice(gens)
        y = rng.choice(gens)
        gx = absolute_gradings(g, x)
        gy = absolute_gradings(g, y)
        dm = gx.maslov - gy.maslov
        da = tuple(a - b for a, b in zip(gx.alexander2, gy.alexander2))
        for _ in range(paths_per_pair):
            path = random_rectangle_path(g, x, y, rng)
            path_dm = sum(1 - 2 * r.no for r in path)
            path_da = tuple(
                sum(2 * (r.nx_comp[i] - r.no_comp[i]) for r in path)
                for i in range(len(g.components))
            )
            if (path_dm, path_da) != (dm, da):
                raise AssertionError(
                    f"path deltas {(path_dm, path_da)} disagree with absolute "
                    f"gradings {(dm, da)} for {x} -> {y}"
                )
        if relative_gradings(g, x, y) != (dm, da):
            raise AssertionError(f"relative gradings disagree for {x} -> {y}")
    return pairs
