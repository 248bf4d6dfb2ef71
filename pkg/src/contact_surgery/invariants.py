"""Invariants read off a surgery diagram.

Homology of the surgered manifold is the cokernel of the extended linking
matrix ``Q``. The meridian of component ``i`` is the ``i``-th standard
basis vector, so classes are integer vectors in meridian coordinates.
All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .diagram import SurgeryComponent, SurgeryDiagram, check, extended_matrix
from .linalg import (
    Matrix,
    determinant,
    rank_mod2,
    signature,
    smith_normal_form,
    solve_mod2,
    solve_rational,
)

MAX_SUBLINKS = 2**20


class InvariantError(ValueError):
    pass


class D3Undefined(InvariantError):
    """``det Q = 0``: not a rational homology sphere."""


class PreconditionError(InvariantError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    """``Z/d_1 + ... + Z/d_k + Z^r`` with ``d_1 | d_2 | ...``, all ``d_i >= 2``.

    ``meridian_map`` has one row per cyclic summand (torsion rows first)
    and one column per meridian; column ``j`` is meridian ``j`` written in
    Smith coordinates.
    """

    torsion: tuple[int, ...]
    free_rank: int
    meridian_map: tuple[tuple[int, ...], ...]
    n_meridians: int

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and not self.free_rank

    @property
    def summary(self) -> tuple[tuple[int, ...], int]:
        return self.torsion, self.free_rank

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Normal form of the class ``sum v_i mu_i``."""
        if len(v) != self.n_meridians:
            raise ValueError(f"expected {self.n_meridians} meridian coordinates, got {len(v)}")
        out = []
        for k, row in enumerate(self.meridian_map):
            x = sum(a * b for a, b in zip(row, v))
            out.append(x % self.torsion[k] if k < len(self.torsion) else x)
        return tuple(out)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologyClass:
    group: AbelianGroup
    coordinates: tuple[int, ...]

    def __post_init__(self):
        if len(self.coordinates) != self.group.n_meridians:
            raise ValueError("coordinate length does not match the meridian count")

    @property
    def reduced(self) -> tuple[int, ...]:
        return self.group.reduce(self.coordinates)

    @property
    def is_zero(self) -> bool:
        return self.group.is_zero(self.coordinates)


def cokernel(q: Matrix, n_rows: int | None = None) -> AbelianGroup:
    """Cokernel of an integer matrix with ``n_rows`` rows (meridians)."""
    n = len(q) if n_rows is None else n_rows
    if n == 0:
        return AbelianGroup((), 0, (), 0)
    cols = len(q[0]) if q and q[0] else 0
    if cols == 0:
        diag, u = [], [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        diag, u, _ = smith_normal_form(q)
    diag = diag + [0] * (n - len(diag))
    torsion_rows = [(d, u[i]) for i, d in enumerate(diag) if d >= 2]
    free_rows = [u[i] for i, d in enumerate(diag) if d == 0]
    return AbelianGroup(
        torsion=tuple(d for d, _ in torsion_rows),
        free_rank=len(free_rows),
        meridian_map=tuple(tuple(r) for _, r in torsion_rows) + tuple(tuple(r) for r in free_rows),
        n_meridians=n,
    )


def homology(d: SurgeryDiagram) -> AbelianGroup:
    return cokernel(extended_matrix(d), len(d))


def euler_class(d: SurgeryDiagram) -> HomologyClass:
    """Poincare dual of the Euler class: ``sum rot_i mu_i``."""
    return HomologyClass(homology(d), tuple(d.rot_vector()))


def euler_quotient(d: SurgeryDiagram) -> tuple[tuple[int, ...], int]:
    """Isomorphism type of ``H_1 / <PD(e)>``.

    Unlike Smith coordinates of the class, this does not depend on the
    chosen presentation, so it is usable as a key.
    """
    q = extended_matrix(d)
    aug = [row + [r] for row, r in zip(q, d.rot_vector())]
    return cokernel(aug, len(d)).summary


def c_squared(d: SurgeryDiagram) -> Fraction:
    q = extended_matrix(d)
    if determinant(q) == 0:
        raise D3Undefined("not a rational homology sphere: d3 undefined in this kernel")
    rot = d.rot_vector()
    x = solve_rational(q, rot)
    return sum((a * b for a, b in zip(x, rot)), Fraction(0))


def d3(d: SurgeryDiagram) -> Fraction:
    """Normalized d3: ``(c^2 - 3 sigma - 2(1 + n))/4 + q + 1/2``.

    ``q`` counts the contact (+1)-surgeries. The standard tight sphere has
    value 0 and the invariant adds under disjoint union.
    """
    q_mat = extended_matrix(d)
    c2 = c_squared(d)
    n = len(d)
    plus = sum(1 for c in d.components if c.sign > 0)
    return (c2 - 3 * signature(q_mat) - 2 * (1 + n)) / 4 + plus + Fraction(1, 2)


def d3_or_none(d: SurgeryDiagram) -> Fraction | None:
    try:
        return d3(d)
    except D3Undefined:
        return None


def format_rational(x: Fraction | None) -> str:
    if x is None:
        return "undefined"
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --- spin structures and the Gamma invariant ---------------------------------


def _char_system(q: Matrix) -> tuple[int | None, list[int]]:
    return solve_mod2(q, [q[i][i] for i in range(len(q))])


def _bits(mask: int, n: int) -> list[int]:
    return [(mask >> k) & 1 for k in range(n)]


def _enumerate(particular: int, kernel: list[int]):
    for sel in range(1 << len(kernel)):
        x = particular
        for k, vec in enumerate(kernel):
            if sel >> k & 1:
                x ^= vec
        yield x


def characteristic_masks(q: Matrix, limit: int = MAX_SUBLINKS) -> list[int]:
    n = len(q)
    if n == 0:
        return [0]
    particular, kernel = _char_system(q)
    if particular is None:
        raise PreconditionError("malformed diagram: no characteristic sublink exists")
    if (1 << len(kernel)) > limit:
        raise InvariantError(
            f"{2 ** len(kernel)} characteristic sublinks exceed the enumeration cap {limit}"
        )
    return sorted(
        _enumerate(particular, kernel),
        key=lambda m: (bin(m).count("1"), [k for k in range(n) if m >> k & 1]),
    )


def characteristic_sublinks(d: SurgeryDiagram) -> list[frozenset[str]]:
    """All characteristic sublinks, ordered by size then canonical position."""
    q = extended_matrix(d)
    ids = d.ids
    return [
        frozenset(ids[k] for k in range(len(ids)) if m >> k & 1)
        for m in characteristic_masks(q)
    ]


def is_characteristic(d: SurgeryDiagram, sub: frozenset[str] | set[str]) -> bool:
    q = extended_matrix(d)
    ids = d.ids
    x = [int(i in sub) for i in ids]
    return all((sum(q[i][j] * x[j] for j in range(len(ids))) - q[i][i]) % 2 == 0 for i in range(len(ids)))


def gamma_vector(q: Matrix, rot: Sequence[int], indicator: Sequence[int]) -> list[int]:
    """``(rot + Q 1_J) / 2`` in meridian coordinates (the sum is always even)."""
    w = [r + sum(q[i][j] * indicator[j] for j in range(len(rot))) for i, r in enumerate(rot)]
    if any(x % 2 for x in w):
        raise PreconditionError("sublink is not characteristic for this diagram")
    return [x // 2 for x in w]


def spinc_classes(d: SurgeryDiagram) -> frozenset[tuple[int, ...]]:
    """Reduced Gamma classes over every characteristic sublink."""
    q = extended_matrix(d)
    g = cokernel(q, len(d))
    rot = d.rot_vector()
    n = len(d)
    return frozenset(g.reduce(gamma_vector(q, rot, _bits(m, n))) for m in characteristic_masks(q))


def spinc_equal(d1: SurgeryDiagram, d2: SurgeryDiagram) -> bool:
    """Gamma invariants agree for every spin structure (same link data, rot may differ)."""
    q = extended_matrix(d1)
    if q != extended_matrix(d2) or d1.ids != d2.ids:
        raise PreconditionError("spinc_equal needs diagrams with equal extended linking matrices")
    g = cokernel(q, len(d1))
    n = len(d1)
    r1, r2 = d1.rot_vector(), d2.rot_vector()
    for m in characteristic_masks(q):
        x = _bits(m, n)
        if g.reduce(gamma_vector(q, r1, x)) != g.reduce(gamma_vector(q, r2, x)):
            return False
    return True


def gamma_difference(
    base: SurgeryDiagram,
    extra: SurgeryComponent,
    linking: Mapping[str, int],
    sublink: frozenset[str] | set[str],
) -> HomologyClass:
    """``Gamma(xi', t) - Gamma(xi, t)`` for a homology-preserving extra surgery.

    The extra meridian must vanish in the new homology and the two groups
    must be isomorphic; then ``mu_i -> mu_i`` identifies them. ``J`` must
    stay characteristic with the extra component added. The one exception
    is an extra component split from the base (a Darboux-ball surgery),
    where the spin structure extends uniquely and ``J + {extra}`` is used.
    """
    check(base)
    sub = frozenset(sublink)
    if not is_characteristic(base, sub):
        raise PreconditionError("sublink is not characteristic for the base diagram")
    ext = base.with_component(extra, linking)
    check(ext)
    g_base = homology(base)
    g_ext = homology(ext)
    i0 = ext.index(extra.id)
    mu0 = [int(k == i0) for k in range(len(ext))]
    if not g_ext.is_zero(mu0):
        raise PreconditionError("homology not preserved: the extra meridian is not nullhomologous")
    if g_base.summary != g_ext.summary:
        raise PreconditionError(
            f"homology not preserved: {g_base} before, {g_ext} after the extra surgery"
        )
    if is_characteristic(ext, sub):
        lifted = sub
    elif not any(linking.values()) and is_characteristic(ext, sub | {extra.id}):
        lifted = sub | {extra.id}
    else:
        raise PreconditionError("sublink is not characteristic for base plus extra")

    q = extended_matrix(base)
    q_ext = extended_matrix(ext)
    gamma = gamma_vector(q, base.rot_vector(), [int(i in sub) for i in base.ids])
    gamma_ext = gamma_vector(q_ext, ext.rot_vector(), [int(i in lifted) for i in ext.ids])
    # include the base class into the extended coordinates, subtract
    incl = list(gamma)
    incl.insert(i0, 0)
    diff = [a - b for a, b in zip(gamma_ext, incl)]
    # diff = diff[i0] mu_0 + (rest); mu_0 = 0, so the pullback drops that coordinate
    pulled = tuple(x for k, x in enumerate(diff) if k != i0)
    return HomologyClass(g_base, pulled)


# --- comparison across a rewrite --------------------------------------------


@dataclass(frozen=True)
class InvariantReport:
    homology: AbelianGroup
    d3: Fraction | None
    euler: tuple[int, ...]
    euler_quotient: tuple[tuple[int, ...], int]

    def row(self) -> dict:
        return {
            "H1": str(self.homology),
            "d3": format_rational(self.d3),
            "euler": "0" if not any(self.euler) else f"{list(self.euler)} in Smith coordinates",
            "H1/<e>": cokernel_summary_str(self.euler_quotient),
        }


def cokernel_summary_str(summary: tuple[tuple[int, ...], int]) -> str:
    torsion, free = summary
    parts = [f"Z/{t}" for t in torsion] + ["Z"] * free
    return " + ".join(parts) if parts else "0"


def report(d: SurgeryDiagram) -> InvariantReport:
    g = homology(d)
    return InvariantReport(g, d3_or_none(d), g.reduce(d.rot_vector()), euler_quotient(d))


def mod2_nullity(d: SurgeryDiagram) -> int:
    q = extended_matrix(d)
    return len(d) - rank_mod2(q) if q else 0
