"""Generators, rectangles and gradings of a grid diagram.

A generator is a permutation sigma of 1..N written as a tuple:
``sigma[i-1]`` is the column of the dot on row i, i.e. the dot sits at
the planar point (sigma(i)-1, i-1) where alpha_i meets beta_sigma(i).
Generators enumerate in lexicographic order.

A rectangle joining x to y is an embedded rectangle on the torus whose
bottom-left and top-right corners are dots of x, whose top-left and
bottom-right corners are dots of y, and whose open interior contains
no dot of either.  It is pinned down by its source permutation, the
unordered pair of rows whose dots move, and a wrap flag choosing which
of the two rows sits at the bottom edge.  The column span is then
forced: it runs rightward from the source dot on the bottom edge to
the source dot on the top edge.  For a fixed ordered pair (x, y) this
leaves at most two rectangles, one per wrap flag.

Maslov gradings follow the rectangle count: a rectangle drops the
Maslov degree by 1 - 2 (O markings covered) and shifts the doubled
Alexander degree of component i by 2 (X_i count - O_i count).  All
Alexander degrees are stored doubled so every value is an integer even
on odd-marking components.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import SizeLimit, StructureViolation
from .grid import Domain, GridDiagram

__all__ = [
    "GENERATOR_CAP",
    "GradingVector",
    "Perm",
    "Rectangle",
    "absolute_gradings",
    "annulus_decomposition",
    "connecting_domain",
    "empty_rectangles_from",
    "generators",
    "hasse_covers",
    "make_rectangle",
    "maslov2_decompositions",
    "rectangles_between",
    "rectangles_from",
    "relative_gradings",
]

Perm = tuple[int, ...]

GENERATOR_CAP = 8


def generators(g: GridDiagram, cap: int = GENERATOR_CAP) -> Iterator[Perm]:
    """All N! generators in lexicographic order."""
    if g.n > cap:
        raise SizeLimit(f"grid index {g.n} exceeds the generator cap {cap}")
    return iter(itertools.permutations(range(1, g.n + 1)))


@dataclass(frozen=True)
class Rectangle:
    """One rectangle, anchored at its source generator.

    ``rows`` is the ascending pair of moving rows; ``row_wrap`` False
    puts rows[0] at the bottom edge, True puts rows[1] there and runs
    the span through the top of the fundamental domain.  The covered
    cells are rows ``row_start .. row_start+row_len-1`` and columns
    ``col_start .. col_start+col_len-1``, both cyclic.
    """

    source: Perm
    rows: tuple[int, int]
    row_wrap: bool
    col_wrap: bool
    row_start: int
    row_len: int
    col_start: int
    col_len: int
    dest: Perm
    nx: int
    no: int
    nx_comp: tuple[int, ...]
    no_comp: tuple[int, ...]

    @property
    def key(self) -> tuple[Perm, tuple[int, int], bool, bool]:
        return (self.source, self.rows, self.row_wrap, self.col_wrap)

    @property
    def empty(self) -> bool:
        return self.nx == 0 and self.no == 0

    def covers(self, r: int, c: int, n: int) -> bool:
        return (r - self.row_start) % n < self.row_len and (
            c - self.col_start
        ) % n < self.col_len

    def cells(self, n: int) -> Iterator[tuple[int, int]]:
        for dr in range(self.row_len):
            r = (self.row_start - 1 + dr) % n + 1
            for dc in range(self.col_len):
                yield r, (self.col_start - 1 + dc) % n + 1

    def domain(self, n: int) -> Domain:
        coeff = [0] * (n * n)
        for r, c in self.cells(n):
            coeff[(r - 1) * n + (c - 1)] = 1
        return Domain(n, tuple(coeff))


def make_rectangle(
    g: GridDiagram, source: Perm, rows: tuple[int, int], row_wrap: bool
) -> Rectangle | None:
    """Build the rectangle for this source/rows/wrap, or None if a dot
    of the source blocks its interior."""
    n = g.n
    a, b = rows
    bottom, top = (b, a) if row_wrap else (a, b)
    row_start = bottom
    row_len = (top - bottom) % n
    col_start = source[bottom - 1]
    col_len = (source[top - 1] - col_start) % n
    # interior alpha circles: rows strictly between the two edges
    for dr in range(1, row_len):
        r = (row_start - 1 + dr) % n + 1
        if 0 < (source[r - 1] - col_start) % n < col_len:
            return None
    dest = list(source)
    dest[a - 1], dest[b - 1] = source[b - 1], source[a - 1]
    nx = no = 0
    nxc = [0] * len(g.components)
    noc = [0] * len(g.components)
    for dr in range(row_len):
        r = (row_start - 1 + dr) % n + 1
        comp = g.component_of_row[r - 1] - 1
        if (g.x_col[r - 1] - col_start) % n < col_len:
            nx += 1
            nxc[comp] += 1
        if (g.o_col[r - 1] - col_start) % n < col_len:
            no += 1
            noc[comp] += 1
    return Rectangle(
        source,
        rows,
        row_wrap,
        col_start + col_len > n,
        row_start,
        row_len,
        col_start,
        col_len,
        tuple(dest),
        nx,
        no,
        tuple(nxc),
        tuple(noc),
    )


@lru_cache(maxsize=None)
def rectangles_from(g: GridDiagram, x: Perm) -> tuple[Rectangle, ...]:
    """All rectangles leaving x, in (row pair, wrap flag) order."""
    out = []
    for rows in itertools.combinations(range(1, g.n + 1), 2):
        for wrap in (False, True):
            rect = make_rectangle(g, x, rows, wrap)
            if rect is not None:
                out.append(rect)
    return tuple(out)


def empty_rectangles_from(g: GridDiagram, x: Perm) -> tuple[Rectangle, ...]:
    return tuple(r for r in rectangles_from(g, x) if r.empty)


def rectangles_between(g: GridDiagram, x: Perm, y: Perm) -> tuple[Rectangle, ...]:
    """The at most two rectangles from x to y."""
    rects = tuple(r for r in rectangles_from(g, x) if r.dest == y)
    if len(rects) > 2:
        raise StructureViolation(f"{len(rects)} rectangles from {x} to {y}")
    return rects


def annulus_decomposition(
    g: GridDiagram, x: Perm, kind: str, i: int
) -> tuple[Rectangle, Rectangle]:
    """The unique splitting of annulus H_i or V_i into two rectangles
    anchored at x.  Needs N >= 2."""
    n = g.n
    if kind == "horizontal":
        # bottom edge alpha_i, top edge alpha_{i+1}; both pieces sit in row i
        bottom, top = i, i % n + 1
    else:
        # left edge beta_i, right edge beta_{i+1}; pieces sit in column i
        bottom = x.index(i) + 1
        top = x.index(i % n + 1) + 1
    rows = (min(bottom, top), max(bottom, top))
    wrap1 = bottom > top
    first = make_rectangle(g, x, rows, wrap1)
    assert first is not None  # a height-1 or width-1 rectangle has no interior rows
    wrap2 = wrap1 if kind == "horizontal" else not wrap1
    second = make_rectangle(g, first.dest, rows, wrap2)
    assert second is not None and second.dest == x
    return first, second


def maslov2_decompositions(
    g: GridDiagram, x: Perm
) -> dict[tuple[Perm, Domain], list[tuple[Rectangle, Rectangle]]]:
    """Composable rectangle pairs out of x, grouped by endpoint and by
    the summed region.

    Contract: a group ending at y != x holds exactly two decompositions
    and a group ending back at x holds exactly one, whose region is a
    full horizontal or vertical annulus.
    """
    groups: dict[tuple[Perm, Domain], list[tuple[Rectangle, Rectangle]]] = {}
    for first in rectangles_from(g, x):
        d1 = first.domain(g.n)
        for second in rectangles_from(g, first.dest):
            key = (second.dest, d1 + second.domain(g.n))
            groups.setdefault(key, []).append((first, second))
    for (end, dom), pairs in groups.items():
        if end == x:
            if len(pairs) != 1 or _annulus_of(dom) is None:
                raise StructureViolation(
                    f"annulus group at {x} has {len(pairs)} splittings"
                )
        elif len(pairs) != 2:
            raise StructureViolation(
                f"group {x} -> {end} has {len(pairs)} splittings, expected 2"
            )
    return groups


def _annulus_of(dom: Domain) -> tuple[str, int] | None:
    """Recognize a Domain as a full row or column of coefficient 1."""
    n = dom.n
    if any(c not in (0, 1) for c in dom.coeff) or sum(dom.coeff) != n:
        return None
    rows = {i // n for i, c in enumerate(dom.coeff) if c}
    cols = {i % n for i, c in enumerate(dom.coeff) if c}
    if len(rows) == 1:
        return "horizontal", rows.pop() + 1
    if len(cols) == 1:
        return "vertical", cols.pop() + 1
    return None


def hasse_covers(g: GridDiagram, x: Perm) -> list[Perm]:
    """Generators directly below x: swap one descending value pair
    (i, j), i < j, x(i) > x(j), with no value of x between them on the
    intervening rows."""
    out = []
    for i, j in itertools.combinations(range(1, g.n + 1), 2):
        if x[i - 1] <= x[j - 1]:
            continue
        if any(x[j - 1] < x[k - 1] < x[i - 1] for k in range(i + 1, j)):
            continue
        y = list(x)
        y[i - 1], y[j - 1] = x[j - 1], x[i - 1]
        out.append(tuple(y))
    return out


def _neighbors(g: GridDiagram, u: Perm) -> Iterator[tuple[Perm, Rectangle, int]]:
    """Edges at u in the rectangle graph: forward rectangles first,
    then rectangles into u traversed against their direction."""
    for rect in rectangles_from(g, u):
        yield rect.dest, rect, 1
    for rows in itertools.combinations(range(1, g.n + 1), 2):
        w = list(u)
        a, b = rows
        w[a - 1], w[b - 1] = u[b - 1], u[a - 1]
        w = tuple(w)
        for wrap in (False, True):
            rect = make_rectangle(g, w, rows, wrap)
            if rect is not None:
                yield w, rect, -1


def connecting_domain(g: GridDiagram, x: Perm, y: Perm) -> tuple[Domain, int]:
    """A region joining x to y: the cell-coefficient sum of a rectangle
    path, together with the signed number k of steps.  Rectangles
    traversed against their own direction count with coefficient -1.
    Any path gives the same gradings, so the first one found wins."""
    n = g.n
    zero = Domain(n, (0,) * (n * n))
    if x == y:
        return zero, 0
    prev: dict[Perm, tuple[Perm, Rectangle, int]] = {x: (x, None, 0)}  # type: ignore[dict-item]
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for w, rect, step in _neighbors(g, u):
            if w not in prev:
                prev[w] = (u, rect, step)
                queue.append(w)
    if y not in prev:
        raise StructureViolation(f"no rectangle path from {x} to {y}")
    dom, k = zero, 0
    node = y
    while node != x:
        node, rect, step = prev[node]
        d = rect.domain(n)
        dom = dom + d if step > 0 else dom - d
        k += step
    return dom, k


def relative_gradings(g: GridDiagram, x: Perm, y: Perm) -> tuple[int, tuple[int, ...]]:
    """(Maslov drop, doubled Alexander drops) from x to y."""
    if x == y:
        return 0, (0,) * len(g.components)
    dom, k = connecting_domain(g, x, y)
    dm = k - 2 * dom.count_o(g)
    da = tuple(
        2 * (nx - no)
        for nx, no in zip(dom.count_x_by_component(g), dom.count_o_by_component(g))
    )
    return dm, da


@dataclass(frozen=True)
class GradingVector:
    """Absolute Maslov degree and doubled Alexander multi-degree."""

    maslov: int
    alexander2: tuple[int, ...]


def _i_count(pts_a: tuple[tuple[int, int], ...], pts_b: tuple[tuple[int, int], ...]) -> int:
    """Pairs (a, b) with a strictly south-west of b."""
    return sum(1 for ax, ay in pts_a for bx, by in pts_b if ax < bx and ay < by)


def _s2(pts_a, pts_b) -> int:
    """Twice the symmetrized south-west count."""
    return _i_count(pts_a, pts_b) + _i_count(pts_b, pts_a)


@lru_cache(maxsize=None)
class _MarkingTables:
    """Per-grid marking geometry, in doubled planar coordinates so the
    half-integer cell centers become lattice points."""

    def __init__(self, g: GridDiagram) -> None:
        self.x_pts = tuple((2 * c - 1, 2 * r - 1) for r, c in enumerate(g.x_col, 1))
        self.o_pts = tuple((2 * c - 1, 2 * r - 1) for r, c in enumerate(g.o_col, 1))
        self.x_by_comp = tuple(
            tuple(self.x_pts[r - 1] for r in sorted(comp.rows)) for comp in g.components
        )
        self.o_by_comp = tuple(
            tuple(self.o_pts[r - 1] for r in sorted(comp.rows)) for comp in g.components
        )
        self.s2_oo = _s2(self.o_pts, self.o_pts) // 2
        # marking-only part of each doubled Alexander degree, fixed per grid
        self.alex_const = []
        for comp, xi, oi in zip(g.components, self.x_by_comp, self.o_by_comp):
            bracket = (
                _s2(self.x_pts, xi)
                - _s2(self.x_pts, oi)
                + _s2(self.o_pts, xi)
                - _s2(self.o_pts, oi)
            )
            assert bracket % 2 == 0
            self.alex_const.append(-bracket // 2 - (comp.m - 1))


def absolute_gradings(g: GridDiagram, x: Perm) -> GradingVector:
    """Absolute gradings from south-west pair counts over the planar
    fundamental domain; dots at lattice points, markings at doubled
    cell centers."""
    tab = _MarkingTables(g)
    pts = tuple((2 * (c - 1), 2 * (r - 1)) for r, c in enumerate(x, 1))
    two_m = (
        _s2(pts, pts)
        - 2 * _s2(pts, tab.o_pts)
        + 2 * tab.s2_oo
        + 2
    )
    assert two_m % 2 == 0
    a2 = tuple(
        _s2(pts, xi) - _s2(pts, oi) + const
        for xi, oi, const in zip(tab.x_by_comp, tab.o_by_comp, tab.alex_const)
    )
    return GradingVector(two_m // 2, a2)
