"""Rectangles, composition structure, Bruhat covers and gradings."""

from __future__ import annotations

import random

import pytest
from conftest import G1, G2K, G2U, G3C, G3U, G4H, G5T

from gridsigns import (
    GridDiagram,
    SizeLimit,
    absolute_gradings,
    annulus_decomposition,
    annulus_region,
    connecting_domain,
    empty_rectangles_from,
    generators,
    hasse_covers,
    make_rectangle,
    maslov2_decompositions,
    rectangles_between,
    rectangles_from,
    relative_gradings,
)

ID2 = (1, 2)
TAU2 = (2, 1)


def test_generators_order_and_cap():
    assert list(generators(G2U)) == [ID2, TAU2]
    assert len(list(generators(G4H))) == 24
    with pytest.raises(SizeLimit):
        generators(G4H, cap=3)


def test_rectangles_from_unlink():
    rects = {r.key: r for r in rectangles_from(G2U, ID2)}
    assert set(rects) == {(ID2, (1, 2), False, False), (ID2, (1, 2), True, True)}
    low = rects[(ID2, (1, 2), False, False)]
    assert (low.row_start, low.row_len, low.col_start, low.col_len) == (1, 1, 1, 1)
    assert (low.nx, low.no) == (1, 1)
    assert low.dest == TAU2
    high = rects[(ID2, (1, 2), True, True)]
    assert (high.row_start, high.col_start) == (2, 2)
    assert sorted(high.cells(2)) == [(2, 2)]


def test_rectangle_counts():
    assert sum(len(rectangles_from(G3U, x)) for x in generators(G3U)) == 27
    assert sum(len(empty_rectangles_from(G4H, x)) for x in generators(G4H)) == 16
    assert sum(len(empty_rectangles_from(G5T, x)) for x in generators(G5T)) == 150


def test_rectangles_between():
    pair = rectangles_between(G2U, TAU2, ID2)
    assert len(pair) == 2
    assert all(r.empty for r in pair)
    # the two rectangles in each direction tile the torus together
    total = pair[0].domain(2) + pair[1].domain(2)
    assert total.coeff == (0, 1, 1, 0)
    for r in rectangles_between(G2U, ID2, TAU2):
        total = total + r.domain(2)
    assert total.coeff == (1, 1, 1, 1)
    assert rectangles_between(G2U, ID2, ID2) == ()


def test_blocked_interior():
    # on the three-row unknot, a height-two span whose middle dot sits
    # inside the column span is not a rectangle
    assert make_rectangle(G3C, (1, 2, 3), (1, 3), False) is None
    # but the complementary wrap is fine
    assert make_rectangle(G3C, (1, 2, 3), (1, 3), True) is not None


def test_domain_and_covers():
    r = make_rectangle(G4H, (1, 4, 3, 2), (1, 3), False)
    assert (r.row_len, r.col_len) == (2, 2)
    dom = r.domain(4)
    assert all(dom.at(rr, cc) == 1 for rr, cc in r.cells(4))
    assert sum(dom.coeff) == r.row_len * r.col_len
    assert all(r.covers(rr, cc, 4) for rr, cc in r.cells(4))
    assert not r.covers(4, 4, 4)


def test_annulus_decomposition_unlink():
    for i in (1, 2):
        pieces = annulus_decomposition(G2U, ID2, "horizontal", i)
        assert len(pieces) == 2
        total = pieces[0].domain(2) + pieces[1].domain(2)
        assert total == annulus_region(G2U, "horizontal", i)
        assert pieces[0].dest == pieces[1].source
        assert pieces[1].dest == ID2
    v1 = annulus_decomposition(G2U, ID2, "vertical", 1)
    assert v1[0].domain(2) + v1[1].domain(2) == annulus_region(G2U, "vertical", 1)


def test_annulus_decomposition_everywhere():
    for g in (G3C, G4H):
        for x in generators(g):
            for kind in ("horizontal", "vertical"):
                for i in range(1, g.n + 1):
                    pieces = annulus_decomposition(g, x, kind, i)
                    total = pieces[0].domain(g.n) + pieces[1].domain(g.n)
                    assert total == annulus_region(g, kind, i)
                    assert pieces[0].source == x and pieces[1].dest == x


def test_maslov2_structure():
    # every two-step composition group is either a square pair or a
    # single annulus; the function raises if not, so touching every
    # generator of these grids is itself the assertion
    for g in (G2U, G2K, G3U, G3C, G4H):
        for x in generators(g):
            groups = maslov2_decompositions(g, x)
            for (dest, dom), decomps in groups.items():
                if dest == x:
                    assert len(decomps) == 1
                else:
                    assert len(decomps) == 2
            closed = sum(1 for (dest, _), _ in groups.items() if dest == x)
            if g.n >= 2:
                assert closed == 2 * g.n


def test_hasse_covers():
    assert hasse_covers(G3U, (1, 2, 3)) == []
    assert hasse_covers(G3U, (2, 1, 3)) == [(1, 2, 3)]
    assert sorted(hasse_covers(G3U, (3, 1, 2))) == [(1, 3, 2), (2, 1, 3)]
    # (3,2,1) covers only the two neighbours one inversion down
    assert sorted(hasse_covers(G3U, (3, 2, 1))) == [(2, 3, 1), (3, 1, 2)]


def test_connecting_domain():
    dom, k = connecting_domain(G2U, TAU2, ID2)
    assert k == 1
    assert sum(dom.coeff) == 1
    # whichever path the search picks, the grading formula must hold
    dom2, k2 = connecting_domain(G2U, ID2, TAU2)
    assert k2 - 2 * dom2.count_o(G2U) == -1
    zero, k0 = connecting_domain(G2U, ID2, ID2)
    assert k0 == 0 and zero.coeff == (0, 0, 0, 0)


def test_relative_gradings_small():
    assert relative_gradings(G2U, TAU2, ID2) == (1, (0, 0))
    assert relative_gradings(G2U, ID2, TAU2) == (-1, (0, 0))
    assert relative_gradings(G2K, TAU2, ID2) == (1, (2,))


@pytest.mark.parametrize(
    "g,x,maslov,alexander2",
    [
        (G1, (1,), 0, (0,)),
        (G2U, ID2, -1, (0, 0)),
        (G2U, TAU2, 0, (0, 0)),
        (G2K, ID2, -1, (-2,)),
        (G2K, TAU2, 0, (0,)),
    ],
)
def test_absolute_anchors(g, x, maslov, alexander2):
    gv = absolute_gradings(g, x)
    assert gv.maslov == maslov
    assert gv.alexander2 == alexander2


def test_absolute_match_relative():
    rng = random.Random(7)
    for g in (G3C, G4H):
        gens = list(generators(g))
        for _ in range(12):
            x, y = rng.choice(gens), rng.choice(gens)
            gx, gy = absolute_gradings(g, x), absolute_gradings(g, y)
            dm, da = relative_gradings(g, x, y)
            assert gx.maslov - gy.maslov == dm
            assert tuple(a - b for a, b in zip(gx.alexander2, gy.alexander2)) == da


def test_empty_rectangle_drops_maslov_by_one():
    for g in (G2K, G3C, G4H):
        for x in generators(g):
            for r in empty_rectangles_from(g, x):
                gx = absolute_gradings(g, x)
                gy = absolute_gradings(g, r.dest)
                assert gx.maslov - gy.maslov == 1
                assert gx.alexander2 == gy.alexander2
