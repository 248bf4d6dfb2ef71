"""Stored surgery diagrams of the overtwisted structures xi_k on S^3.

``xi_1`` is contact (+1)-surgery on the Legendrian unknot with tb = -2,
rot = 1. The two-component diagrams for ``xi_0`` and ``xi_-1`` come from
an exhaustive search (see :func:`search_sphere_diagrams`) and are frozen
here; the test suite re-runs the search and checks the frozen data.
Every stored diagram has a (+1)-surgery on a stabilized unknot, which is
what makes it overtwisted rather than merely of the right d3.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .diagram import SurgeryComponent, SurgeryDiagram, disjoint_union, extended_matrix
from .invariants import d3
from .linalg import determinant

XI_1 = SurgeryDiagram.build([SurgeryComponent("u", -2, 1, 1)])

XI_0 = SurgeryDiagram.build(
    [SurgeryComponent("a", -2, -1, -1), SurgeryComponent("b", -2, 1, 1)],
    {("a", "b"): 2},
)

XI_MINUS_1 = SurgeryDiagram.build(
    [SurgeryComponent("a", -4, -1, -1), SurgeryComponent("b", -2, -1, 1)],
    {("a", "b"): 2},
)

SPHERE_SUMMANDS = {1: XI_1, 0: XI_0, -1: XI_MINUS_1}


def xi(k: int) -> SurgeryDiagram:
    """A diagram of the overtwisted ``xi_k`` on S^3 (disjoint copies of xi_+-1)."""
    if k == 0:
        return XI_0
    piece = XI_1 if k > 0 else XI_MINUS_1
    out = SurgeryDiagram()
    for _ in range(abs(k)):
        out = disjoint_union(out, piece)
    return out


def _search_key(d: SurgeryDiagram) -> tuple:
    a, b = d.components
    return (
        abs(a.tb) + abs(b.tb),
        abs(d.lk(a.id, b.id)),
        -(a.sign + b.sign),
        a.tb, b.tb, a.rot, b.rot, a.sign, b.sign, d.lk(a.id, b.id),
    )


def search_sphere_diagrams(
    target: int | Fraction, tb_range=range(-6, 0), lk_range=range(-3, 4)
) -> list[SurgeryDiagram]:
    """All 2-component unknot diagrams of S^3 with the given d3, best first.

    Rotation numbers obey the unknot bound ``|rot| <= -tb - 1``. Cancelling
    pairs are skipped, and at least one (+1)-surgery must sit on a
    stabilized unknot (tb <= -2).
    """
    found = []
    for tb1, tb2 in product(tb_range, repeat=2):
        for r1, r2 in product(range(tb1 + 1, -tb1, 2), range(tb2 + 1, -tb2, 2)):
            for s1, s2, lk in product((1, -1), (1, -1), lk_range):
                if tb1 == tb2 and r1 == r2 and lk == tb1 and s1 == -s2:
                    continue
                if not ((s1 > 0 and tb1 <= -2) or (s2 > 0 and tb2 <= -2)):
                    continue
                d = SurgeryDiagram.build(
                    [SurgeryComponent("a", tb1, r1, s1), SurgeryComponent("b", tb2, r2, s2)],
                    {("a", "b"): lk},
                )
                if abs(determinant(extended_matrix(d))) != 1:
                    continue
                if d3(d) == target:
                    found.append(d)
    found.sort(key=_search_key)
    return found
