"""Sign assignments on the rectangles of a grid diagram.

A sign assignment gives every rectangle a sign in {+1, -1} so that for
each region splitting into two rectangle pairs through distinct
intermediate generators, the two pair products are opposite (the
square relation).  Composing an assignment with a generator-indexed
sign t, s'(R) = t(from) t(to) s(R), is a gauge change; the annulus
products h(i), v(i) read off the unique two-rectangle splitting of
each horizontal and vertical annulus do not depend on the generator
used and are a complete gauge invariant once v(N) is dropped.

The solver treats each rectangle sign as one bit over GF(2): every
two-splitting group adds the relation "the four bits sum to 1" and
every annulus splitting adds "the two bits sum to the target bit".
Elimination runs once per grid with the right-hand side kept symbolic
in the 2N annulus targets, so solving for further targets is a cheap
back-substitution.  Variable order is rectangle key order; the
canonical solution sets every free variable to +1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .combinatorics import (
    Perm,
    Rectangle,
    annulus_decomposition,
    generators,
    hasse_covers,
    make_rectangle,
    maslov2_decompositions,
    rectangles_from,
)
from .errors import (
    GridMismatch,
    Infeasible,
    ParityViolation,
    ProductNotOne,
    ProjectionViolation,
    SizeLimit,
    StructureViolation,
)
from .grid import GridDiagram

__all__ = [
    "HVProfile",
    "SignAssignment",
    "TwoCochain",
    "VerifyReport",
    "WeakClass",
    "canonical_targets",
    "component_signs",
    "enumerate_sign_assignments",
    "gauge_transform",
    "gauge_witness",
    "hv_profile",
    "modify_by_cochain",
    "phi",
    "solve_signs",
    "verify_sign_assignment",
    "weak_align",
]


@dataclass(frozen=True)
class HVProfile:
    """Target or measured annulus sign products, h for rows, v for columns."""

    h: tuple[int, ...]
    v: tuple[int, ...]

    def parity_ok(self) -> bool:
        """Realizable iff #(v = +1) and #(h = -1) have equal parity."""
        return (self.v.count(1) - self.h.count(-1)) % 2 == 0


@dataclass(frozen=True)
class WeakClass:
    """Per-component signs r with product +1."""

    r: tuple[int, ...]


@dataclass(frozen=True)
class TwoCochain:
    """A set of cells to flip: s'(R) = s(R) * (-1)^(cells of R in the set)."""

    flips: frozenset[tuple[int, int]]


@dataclass
class SignAssignment:
    """A total map from the rectangles of ``grid`` to {+1, -1}."""

    grid: GridDiagram
    values: dict[Rectangle, int]

    def sign(self, rect: Rectangle) -> int:
        return self.values[rect]


def _target_bits(g: GridDiagram, target: HVProfile) -> int:
    """Pack a target profile plus the constant-1 slot into an int."""
    n = g.n
    bits = 1 << (2 * n)
    for i, hval in enumerate(target.h):
        if hval == -1:
            bits |= 1 << i
    for j, vval in enumerate(target.v):
        if vval == -1:
            bits |= 1 << (n + j)
    return bits


@dataclass
class _SignSystem:
    """Eliminated constraint system for one grid, reusable per target."""

    grid: GridDiagram
    rects: tuple[Rectangle, ...]
    pivots: tuple[tuple[int, int], ...] = field(repr=False)  # (variable, aug bits)
    checks: tuple[int, ...] = field(repr=False)  # aug bits that must cancel

    def solve(self, target: HVProfile) -> dict[Rectangle, int]:
        tau = _target_bits(self.grid, target)
        for aug in self.checks:
            if (aug & tau).bit_count() & 1:
                raise Infeasible(
                    "constraints inconsistent for a parity-legal target"
                )
        values = dict.fromkeys(self.rects, 1)
        for var, aug in self.pivots:
            if (aug & tau).bit_count() & 1:
                values[self.rects[var]] = -1
        return values


def _gf2_eliminate(
    bit_rows: list[tuple[int, ...]], nvar: int, naug: int
) -> tuple[list[tuple[int, int]], list[int]]:
    """Reduced echelon form over GF(2) with pivots restricted to the
    first nvar columns, processed in ascending order.

    Returns (pivots, checks): per pivot column the aug bits feeding its
    value, plus the aug parts of fully reduced rows, which any
    right-hand side has to cancel.
    """
    ncols = nvar + naug
    words = (ncols + 63) // 64
    mat = np.zeros((max(len(bit_rows), 1), words), dtype=np.uint64)
    for r, bits in enumerate(bit_rows):
        for b in bits:
            mat[r, b >> 6] |= np.uint64(1 << (b & 63))
    nrows = len(bit_rows)
    top = 0
    pivot_cols: list[int] = []
    for col in range(nvar):
        if top == nrows:
            break
        w = col >> 6
        sh = np.uint64(col & 63)
        one = np.uint64(1)
        nz = np.nonzero((mat[top:nrows, w] >> sh) & one)[0]
        if nz.size == 0:
            continue
        pr = top + int(nz[0])
        if pr != top:
            mat[[top, pr]] = mat[[pr, top]]
        piv = mat[top].copy()
        below = np.nonzero((mat[top + 1 : nrows, w] >> sh) & one)[0]
        if below.size:
            mat[top + 1 + below] ^= piv
        pivot_cols.append(col)
        top += 1
    # back-substitute so each pivot row mentions no other pivot column
    for k in range(len(pivot_cols) - 1, 0, -1):
        col = pivot_cols[k]
        w = col >> 6
        sh = np.uint64(col & 63)
        one = np.uint64(1)
        above = np.nonzero((mat[:k, w] >> sh) & one)[0]
        if above.size:
            mat[above] ^= mat[k]
    var_mask = (1 << nvar) - 1
    pivots = []
    for k, col in enumerate(pivot_cols):
        row_int = int.from_bytes(mat[k].tobytes(), "little")
        pivots.append((col, row_int >> nvar))
    checks = []
    for r in range(len(pivot_cols), nrows):
        row_int = int.from_bytes(mat[r].tobytes(), "little")
        assert row_int & var_mask == 0
        aug = row_int >> nvar
        if aug:
            checks.append(aug)
    return pivots, sorted(set(checks))


@lru_cache(maxsize=8)
def _system_for(g: GridDiagram) -> _SignSystem:
    n = g.n
    rects: list[Rectangle] = []
    for sigma in generators(g):
        rects.extend(rectangles_from(g, sigma))
    index = {rect: i for i, rect in enumerate(rects)}
    nvar = len(rects)
    const_bit = nvar + 2 * n
    rows: set[tuple[int, ...]] = set()
    for sigma in generators(g):
        for (end, dom), pairs in maslov2_decompositions(g, sigma).items():
            if end == sigma:
                ((first, second),) = pairs
                kind, i = _annulus_kind(dom)
                slot = nvar + (i - 1) + (0 if kind == "horizontal" else n)
                rows.add(tuple(sorted((index[first], index[second]))) + (slot,))
            else:
                (a1, a2), (b1, b2) = pairs
                quad = sorted({index[a1], index[a2], index[b1], index[b2]})
                rows.add(tuple(quad) + (const_bit,))
    pivots, checks = _gf2_eliminate(sorted(rows), nvar, 2 * n + 1)
    return _SignSystem(g, tuple(rects), tuple(pivots), tuple(checks))


def _annulus_kind(dom) -> tuple[str, int]:
    n = dom.n
    support = [i for i, c in enumerate(dom.coeff) if c]
    rows = {i // n for i in support}
    cols = {i % n for i in support}
    if len(rows) == 1:
        return "horizontal", rows.pop() + 1
    if len(cols) == 1:
        return "vertical", cols.pop() + 1
    raise StructureViolation("closed group region is not an annulus")


def solve_signs(g: GridDiagram, target: HVProfile) -> SignAssignment:
    """The canonical sign assignment whose annulus products equal the
    target profile.  Raises ParityViolation for unrealizable targets."""
    if len(target.h) != g.n or len(target.v) != g.n:
        raise ParityViolation(
            f"profile needs {g.n} h values and {g.n} v values"
        )
    if not target.parity_ok():
        raise ParityViolation(
            "counts of +1 columns and -1 rows differ in parity"
        )
    if g.n == 1 and target != HVProfile((1,), (-1,)):
        # no rectangles exist, so no other profile is observable
        raise ParityViolation("a one-cell grid admits only h=(+1,), v=(-1,)")
    return SignAssignment(g, _system_for(g).solve(target))


def hv_profile(s: SignAssignment, *, check: bool = True) -> HVProfile:
    """Annulus products of s, read at the identity generator.

    With ``check`` set, every other generator is read too and any
    disagreement raises ProjectionViolation.  A 1x1 grid has no
    rectangles; its profile is fixed at h = (+1,), v = (-1,).
    """
    g = s.grid
    n = g.n
    if n == 1:
        return HVProfile((1,), (-1,))
    gens = list(generators(g)) if check else [tuple(range(1, n + 1))]
    h: list[int] = []
    v: list[int] = []
    for kind, out in (("horizontal", h), ("vertical", v)):
        for i in range(1, n + 1):
            seen = set()
            for x in gens:
                first, second = annulus_decomposition(g, x, kind, i)
                seen.add(s.sign(first) * s.sign(second))
            if len(seen) != 1:
                raise ProjectionViolation(
                    f"{kind} annulus {i} products differ between generators"
                )
            out.append(seen.pop())
    return HVProfile(tuple(h), tuple(v))


def phi(s: SignAssignment) -> tuple[int, ...]:
    """Complete gauge invariant: h(1..N) followed by v(1..N-1)."""
    prof = hv_profile(s, check=False)
    return prof.h + prof.v[:-1]


def component_signs(s: SignAssignment) -> WeakClass:
    """Per-component signs; their product is +1 for every assignment."""
    prof = hv_profile(s, check=False)
    r = []
    for comp in s.grid.components:
        val = 1
        for j in comp.rows:
            val *= prof.h[j - 1]
        for j in comp.cols:
            val *= -prof.v[j - 1]
        r.append(val)
    if math.prod(r) != 1:
        raise ProductNotOne("component sign product came out -1 (bug)")
    return WeakClass(tuple(r))


def canonical_targets(g: GridDiagram, weak: WeakClass) -> HVProfile:
    """Representative profile of a weak class: start from h = +1,
    v = -1 and flip v at the least column of each component with
    r = -1."""
    comps = g.components
    if len(weak.r) != len(comps):
        raise ProductNotOne(
            f"class vector has {len(weak.r)} entries for {len(comps)} components"
        )
    if math.prod(weak.r) != 1:
        raise ProductNotOne("product of component signs must be +1")
    h = [1] * g.n
    v = [-1] * g.n
    for comp, r in zip(comps, weak.r):
        if r == -1:
            v[min(comp.cols) - 1] *= -1
    return HVProfile(tuple(h), tuple(v))


def all_weak_classes(g: GridDiagram) -> list[WeakClass]:
    """The 2^(l-1) weak classes, in lexicographic order with +1 < -1."""
    out = []
    for bits in itertools.product((1, -1), repeat=len(g.components)):
        if math.prod(bits) == 1:
            out.append(WeakClass(bits))
    return out


def modify_by_cochain(s: SignAssignment, m: TwoCochain) -> SignAssignment:
    """Flip s over a cell set: each rectangle changes by (-1)^(cells of
    the set it covers).  Square relations survive because the two
    splittings of a region cover the same cells."""
    n = s.grid.n
    values = {}
    for rect, sign in s.values.items():
        hits = sum(1 for r, c in m.flips if rect.covers(r, c, n))
        values[rect] = -sign if hits & 1 else sign
    return SignAssignment(s.grid, values)


def gauge_transform(s: SignAssignment, t: dict[Perm, int]) -> SignAssignment:
    """Apply a generator-indexed sign: s'(R) = t(from) t(to) s(R)."""
    values = {
        rect: t[rect.source] * t[rect.dest] * sign for rect, sign in s.values.items()
    }
    return SignAssignment(s.grid, values)


def gauge_witness(s1: SignAssignment, s2: SignAssignment) -> dict[Perm, int] | None:
    """A generator sign t with s1 = t-conjugated s2, or None.

    t is fixed by walking a spanning tree of the cover graph from the
    identity (where t = +1) and then checked against every rectangle.
    """
    if s1.grid != s2.grid:
        raise GridMismatch("sign assignments live on different grids")
    g = s1.grid
    identity = tuple(range(1, g.n + 1))
    t: dict[Perm, int] = {identity: 1}
    stack = [identity]
    edges: dict[Perm, list[Perm]] = {}
    for x in generators(g):
        for y in hasse_covers(g, x):
            edges.setdefault(x, []).append(y)
            edges.setdefault(y, []).append(x)
    while stack:
        u = stack.pop()
        for w in edges.get(u, ()):
            if w in t:
                continue
            lo, hi = (w, u) if w in hasse_covers(g, u) else (u, w)
            rect = _cover_rectangle(g, hi, lo)
            t[w] = t[u] * s1.sign(rect) * s2.sign(rect)
            stack.append(w)
    for rect, v1 in s1.values.items():
        if v1 != t[rect.source] * t[rect.dest] * s2.sign(rect):
            return None
    return t


def _cover_rectangle(g: GridDiagram, upper: Perm, lower: Perm) -> Rectangle:
    """The wrap-free rectangle from the covered generator up to its cover."""
    diff = tuple(i + 1 for i in range(g.n) if upper[i] != lower[i])
    rect = make_rectangle(g, lower, diff, False)
    assert rect is not None and rect.dest == upper and not rect.col_wrap
    return rect


def weak_align(s1: SignAssignment, s2: SignAssignment) -> SignAssignment | None:
    """Gauge-equivalent replacement for s2 agreeing with s1 on every
    rectangle that avoids the markings, or None when the two sit in
    different weak classes.  Realized by flipping s1 over marked cells
    only, which leaves marking-free rectangles untouched."""
    if s1.grid != s2.grid:
        raise GridMismatch("sign assignments live on different grids")
    g = s1.grid
    if component_signs(s1) != component_signs(s2):
        return None
    p1 = hv_profile(s1, check=False)
    p2 = hv_profile(s2, check=False)
    cells = sorted(
        {(r, g.x_col[r - 1]) for r in range(1, g.n + 1)}
        | {(r, g.o_col[r - 1]) for r in range(1, g.n + 1)}
    )
    col_of = {cell: k for k, cell in enumerate(cells)}
    rows: list[tuple[int, ...]] = []
    rhs_bit = (len(cells),)
    for i in range(1, g.n + 1):
        bits = tuple(col_of[cell] for cell in cells if cell[0] == i)
        rows.append(bits + rhs_bit if p1.h[i - 1] != p2.h[i - 1] else bits)
    for j in range(1, g.n + 1):
        bits = tuple(col_of[cell] for cell in cells if cell[1] == j)
        rows.append(bits + rhs_bit if p1.v[j - 1] != p2.v[j - 1] else bits)
    pivots, checks = _gf2_eliminate(rows, len(cells), 1)
    if any(checks):
        raise Infeasible("marked-cell flip system inconsistent inside a weak class")
    flips = frozenset(cells[var] for var, aug in pivots if aug)
    return modify_by_cochain(s1, TwoCochain(flips))


@dataclass
class VerifyReport:
    """Outcome of a full audit of one sign assignment."""

    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_sign_assignment(s: SignAssignment) -> VerifyReport:
    """Audit totality, the square relations, annulus agreement across
    generators and the annulus product identity."""
    g = s.grid
    n = g.n
    bad: list[str] = []
    expected: set[Rectangle] = set()
    for sigma in generators(g):
        expected.update(rectangles_from(g, sigma))
    if set(s.values) != expected:
        bad.append(
            f"assignment covers {len(s.values)} rectangles, grid has {len(expected)}"
        )
        return VerifyReport(bad)
    if any(v not in (1, -1) for v in s.values.values()):
        bad.append("values outside {+1, -1}")
        return VerifyReport(bad)
    annulus_products: dict[tuple[str, int], set[int]] = {}
    for sigma in generators(g):
        for (end, dom), pairs in maslov2_decompositions(g, sigma).items():
            if end == sigma:
                ((first, second),) = pairs
                kind_i = _annulus_kind(dom)
                annulus_products.setdefault(kind_i, set()).add(
                    s.sign(first) * s.sign(second)
                )
            else:
                (a1, a2), (b1, b2) = pairs
                if s.sign(a1) * s.sign(a2) != -s.sign(b1) * s.sign(b2):
                    bad.append(f"square relation fails at {sigma} -> {end}")
    for (kind, i), vals in sorted(annulus_products.items()):
        if len(vals) != 1:
            bad.append(f"{kind} annulus {i} product depends on the generator")
    if n >= 2 and not bad:
        prof = hv_profile(s, check=False)
        total = math.prod(prof.h) * math.prod(prof.v)
        if total != (-1) ** n:
            bad.append(
                f"product of all annulus signs is {total}, expected {(-1) ** n}"
            )
    return VerifyReport(bad)


def enumerate_sign_assignments(g: GridDiagram, cap: int = 3) -> tuple[int, int]:
    """(solution count, gauge class count) of the square relations
    alone.  Exponential; callable only for N <= cap."""
    if g.n > cap:
        raise SizeLimit(f"enumeration capped at N <= {cap}")
    rects: list[Rectangle] = []
    for sigma in generators(g):
        rects.extend(rectangles_from(g, sigma))
    index = {rect: i for i, rect in enumerate(rects)}
    rows: set[tuple[int, ...]] = set()
    for sigma in generators(g):
        for (end, _), pairs in maslov2_decompositions(g, sigma).items():
            if end == sigma:
                continue
            (a1, a2), (b1, b2) = pairs
            rows.add(tuple(sorted({index[a1], index[a2], index[b1], index[b2]})))
    pivots, _ = _gf2_eliminate(sorted(rows), len(rects), 0)
    count = 1 << (len(rects) - len(pivots))
    orbit = 1 << (math.factorial(g.n) - 1)
    if count % orbit:
        raise StructureViolation("solution count is not a whole number of gauge orbits")
    return count, count // orbit
