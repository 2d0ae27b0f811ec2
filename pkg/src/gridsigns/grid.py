"""Toroidal grid diagrams: parsing, validation, components, annuli.

Conventions used everywhere in this package:

* Rows are numbered 1..N bottom to top, columns 1..N left to right.
* Cell (r, c) is the unit square [c-1, c] x [r-1, r] inside the planar
  fundamental domain [0, N]^2.  Opposite sides of the domain are
  identified, so all row and column arithmetic is cyclic.
* alpha_i is the horizontal circle at height i-1 and beta_j the
  vertical circle at x = j-1.  The horizontal annulus H_i is the row
  of cells (i, *) with alpha_i on its bottom edge; the vertical
  annulus V_j is the column of cells (*, j) with beta_j on its left.
* Each row and each column carries exactly one X and one O marking.
  A single cell may carry both; that configuration is legal and is in
  fact required to present split unlinks on minimal grids.

A link component is reconstructed by following arcs: within a row the
X connects to the O, within a column the O connects to the X, and the
cycle closes after visiting every row of the component exactly once.
The traversal order doubles as an orientation record (vertical arcs
always cross over horizontal ones in the planar picture); nothing in
the homology pipeline consumes it, but it is kept on the component.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BadIndex, GridSyntaxError, IndexOutOfRange, NotAPermutation

__all__ = [
    "Domain",
    "GridDiagram",
    "LinkComponent",
    "annulus_region",
    "components",
    "grid_sha",
    "parse_grid",
    "to_json",
    "to_text",
]


@dataclass(frozen=True)
class LinkComponent:
    """One link component: its rows, its columns and its marking count."""

    id: int
    rows: frozenset[int]
    cols: frozenset[int]
    row_cycle: tuple[int, ...] = field(compare=False)

    @property
    def m(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class GridDiagram:
    """An index-N toroidal grid diagram.

    ``x_col[r-1]`` is the column of the X marking in row r, likewise
    ``o_col`` for the O markings.  Both must be permutations of 1..N.
    """

    n: int
    x_col: tuple[int, ...]
    o_col: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GridSyntaxError(f"grid index must be positive, got {self.n}")
        for name, cols in (("X", self.x_col), ("O", self.o_col)):
            if len(cols) != self.n:
                raise NotAPermutation(
                    f"{name} list has {len(cols)} entries, expected {self.n}"
                )
            for c in cols:
                if not 1 <= c <= self.n:
                    raise BadIndex(f"{name} column {c} outside 1..{self.n}")
            if len(set(cols)) != self.n:
                raise NotAPermutation(f"{name} columns are not a permutation of 1..{self.n}")

    @cached_property
    def components(self) -> tuple[LinkComponent, ...]:
        """Link components, ordered by their smallest row index."""
        xinv = {c: r for r, c in enumerate(self.x_col, start=1)}
        comps: list[LinkComponent] = []
        seen: set[int] = set()
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cycle: list[int] = []
            r = start
            while r not in seen:
                seen.add(r)
                cycle.append(r)
                # row arc X -> O, then column arc O -> X in column o_col[r]
                r = xinv[self.o_col[r - 1]]
            rows = frozenset(cycle)
            cols = frozenset(self.x_col[r - 1] for r in cycle)
            comps.append(LinkComponent(len(comps) + 1, rows, cols, tuple(cycle)))
        return tuple(comps)

    @cached_property
    def component_of_row(self) -> tuple[int, ...]:
        """Component id owning the X (and O) of each row; index r-1."""
        owner = [0] * self.n
        for comp in self.components:
            for r in comp.rows:
                owner[r - 1] = comp.id
        return tuple(owner)

    def has_x(self, r: int, c: int) -> bool:
        return self.x_col[r - 1] == c

    def has_o(self, r: int, c: int) -> bool:
        return self.o_col[r - 1] == c


def components(g: GridDiagram) -> tuple[LinkComponent, ...]:
    return g.components


@dataclass(frozen=True)
class Domain:
    """A 2-chain: one integer coefficient per cell, row-major."""

    n: int
    coeff: tuple[int, ...]

    def at(self, r: int, c: int) -> int:
        return self.coeff[(r - 1) * self.n + (c - 1)]

    def __add__(self, other: "Domain") -> "Domain":
        return Domain(self.n, tuple(a + b for a, b in zip(self.coeff, other.coeff)))

    def __sub__(self, other: "Domain") -> "Domain":
        return Domain(self.n, tuple(a - b for a, b in zip(self.coeff, other.coeff)))

    def __neg__(self) -> "Domain":
        return Domain(self.n, tuple(-a for a in self.coeff))

    def count_o(self, g: GridDiagram) -> int:
        """Signed number of O markings covered, with multiplicity."""
        return sum(self.at(r, g.o_col[r - 1]) for r in range(1, self.n + 1))

    def count_x(self, g: GridDiagram) -> int:
        return sum(self.at(r, g.x_col[r - 1]) for r in range(1, self.n + 1))

    def count_x_by_component(self, g: GridDiagram) -> tuple[int, ...]:
        out = [0] * len(g.components)
        for r in range(1, self.n + 1):
            out[g.component_of_row[r - 1] - 1] += self.at(r, g.x_col[r - 1])
        return tuple(out)

    def count_o_by_component(self, g: GridDiagram) -> tuple[int, ...]:
        out = [0] * len(g.components)
        for r in range(1, self.n + 1):
            out[g.component_of_row[r - 1] - 1] += self.at(r, g.o_col[r - 1])
        return tuple(out)


def annulus_region(g: GridDiagram, kind: str, i: int) -> Domain:
    """Indicator Domain of the horizontal annulus H_i or vertical V_i."""
    if not 1 <= i <= g.n:
        raise IndexOutOfRange(f"annulus index {i} outside 1..{g.n}")
    coeff = [0] * (g.n * g.n)
    if kind == "horizontal":
        for c in range(1, g.n + 1):
            coeff[(i - 1) * g.n + (c - 1)] = 1
    elif kind == "vertical":
        for r in range(1, g.n + 1):
            coeff[(r - 1) * g.n + (i - 1)] = 1
    else:
        raise IndexOutOfRange(f"annulus kind must be horizontal or vertical, got {kind!r}")
    return Domain(g.n, tuple(coeff))


def parse_grid(text: str) -> GridDiagram:
    """Parse the plain text grid format.

    Three directives ``N = <int>``, ``X = <cols>`` and ``O = <cols>``,
    one per line; ``#`` starts a comment; semicolons may stand in for
    newlines so one-liners like ``N=2; X=1 2; O=1 2`` work too.
    """
    n: int | None = None
    lists: dict[str, tuple[int, ...]] = {}
    for raw in text.replace(";", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise GridSyntaxError(f"expected 'name = value', got {line!r}")
        key = key.strip().upper()
        try:
            values = tuple(int(tok) for tok in value.split())
        except ValueError as exc:
            raise GridSyntaxError(f"non-integer value in {line!r}") from exc
        if key == "N":
            if len(values) != 1:
                raise GridSyntaxError(f"N takes a single integer, got {line!r}")
            n = values[0]
        elif key in ("X", "O"):
            if key in lists:
                raise GridSyntaxError(f"duplicate {key} directive")
            lists[key] = values
        else:
            raise GridSyntaxError(f"unknown directive {key!r}")
    if n is None or "X" not in lists or "O" not in lists:
        raise GridSyntaxError("grid text needs all three of N, X and O")
    return GridDiagram(n, lists["X"], lists["O"])


def to_text(g: GridDiagram) -> str:
    """Canonical text form; parse_grid(to_text(g)) == g."""
    return (
        f"N = {g.n}\n"
        f"X = {' '.join(str(c) for c in g.x_col)}\n"
        f"O = {' '.join(str(c) for c in g.o_col)}\n"
    )


def grid_sha(g: GridDiagram) -> str:
    """Hex digest identifying the grid, used to pair sign files with grids."""
    return hashlib.sha256(to_text(g).encode()).hexdigest()


def to_json(g: GridDiagram) -> str:
    """JSON echo of the diagram and its derived component structure."""
    doc = {
        "n": g.n,
        "x": list(g.x_col),
        "o": list(g.o_col),
        "components": [
            {
                "id": comp.id,
                "rows": sorted(comp.rows),
                "cols": [g.x_col[r - 1] for r in sorted(comp.rows)],
                "m": comp.m,
            }
            for comp in g.components
        ],
    }
    return json.dumps(doc, separators=(",", ":"))
