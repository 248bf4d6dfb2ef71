"""Verified rewrites of surgery diagrams.

A move that claims to keep the surgered contact manifold fixed comes with
an explicit identification of homologies: an integer matrix ``T`` taking
old meridian coordinates to new ones. After rewriting, :func:`verify`
checks that ``T`` is a well-defined isomorphism and that it carries d3,
the Euler class and every Gamma class of the old diagram onto the new
one. A rewrite failing any of these is rejected with
:class:`InvarianceError`, never returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .diagram import (
    DiagramError,
    SurgeryComponent,
    SurgeryDiagram,
    check,
    disjoint_union,
    extended_matrix,
)
from .invariants import (
    PreconditionError,
    _bits,
    characteristic_masks,
    cokernel,
    d3_or_none,
    gamma_vector,
    spinc_classes,
)
from .linalg import Matrix, determinant, matvec, solve_rational
from .standard import SPHERE_SUMMANDS

MOVE_KINDS = (
    "stabilize_component",
    "ambient_connect_sum",
    "cancel_pair",
    "handle_slide",
    "add_meridian",
    "lemma42_move",
    "avdek_merge",
    "detour_insert",
    "detour_close",
)


class MoveError(PreconditionError):
    """A move's precondition does not hold."""


class InvarianceError(AssertionError):
    """A rewrite changed an invariant it must preserve."""

    def __init__(self, message: str, before: SurgeryDiagram, after: SurgeryDiagram):
        super().__init__(
            f"{message}\n--- before ---\n{before.to_text()}--- after ---\n{after.to_text()}"
        )
        self.before = before
        self.after = after


# --- identification checks --------------------------------------------------


def verify(old: SurgeryDiagram, new: SurgeryDiagram, t: Matrix, what: str = "move") -> None:
    """Check that ``t`` identifies the invariants of ``old`` with those of ``new``."""
    q_old = extended_matrix(old)
    q_new = extended_matrix(new)
    g_old = cokernel(q_old, len(old))
    g_new = cokernel(q_new, len(new))

    def fail(msg):
        raise InvarianceError(f"{what}: {msg}", old, new)

    def push(v):
        return matvec(t, v) if new.components else []

    if g_old.summary != g_new.summary:
        fail(f"homology changed from {g_old} to {g_new}")
    for j in range(len(old)):
        if not g_new.is_zero(push([row[j] for row in q_old])):
            fail("meridian map is not well defined on homology")
    if len(new):
        aug = [list(t_row) + list(q_row) for t_row, q_row in zip(t, q_new)] if len(old) else q_new
        if not cokernel(aug, len(new)).is_trivial:
            fail("meridian map is not onto")
    if d3_or_none(old) != d3_or_none(new):
        fail(f"d3 changed from {d3_or_none(old)} to {d3_or_none(new)}")
    e = [a - b for a, b in zip(push(old.rot_vector()), new.rot_vector())]
    if not g_new.is_zero(e):
        fail("Euler class not preserved under the meridian map")
    rot = old.rot_vector()
    pushed = frozenset(
        g_new.reduce(push(gamma_vector(q_old, rot, _bits(m, len(old)))))
        for m in characteristic_masks(q_old)
    )
    if pushed != spinc_classes(new):
        fail("spin^c structure (Gamma classes) not preserved")


def _integer_inverse(c: Matrix) -> Matrix:
    if abs(determinant(c)) != 1:
        raise MoveError("deleted block is not unimodular")
    n = len(c)
    cols = [solve_rational(c, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[int(cols[j][i]) for j in range(n)] for i in range(n)]


def deletion_map(old: SurgeryDiagram, deleted: Sequence[str], new: SurgeryDiagram) -> Matrix:
    """Meridian map for deleting a unimodular block of components.

    Kept meridians go to themselves, deleted ones to ``-B C^{-1}`` (Schur
    complement of the block ``C``). Components of ``new`` not present in
    ``old`` get zero rows; they must be nullhomologous summands.
    """
    ids = old.ids
    q = extended_matrix(old)
    dele = [ids.index(x) for x in deleted]
    kept = [k for k in range(len(ids)) if k not in dele]
    c_inv = _integer_inverse([[q[a][b] for b in dele] for a in dele])
    b = [[q[a][x] for x in dele] for a in kept]
    bc = [[sum(b[r][k] * c_inv[k][s] for k in range(len(dele))) for s in range(len(dele))] for r in range(len(kept))]
    rows = {}
    for r, a in enumerate(kept):
        row = [0] * len(ids)
        row[a] = 1
        for s, x in enumerate(dele):
            row[x] = -bc[r][s]
        rows[ids[a]] = row
    return [rows.get(cid, [0] * len(ids)) for cid in new.ids]


# --- records ----------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class MoveRecord:
    kind: str
    params: dict = field(hash=False)
    before_hash: str
    after_hash: str

    def to_data(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "before_hash": self.before_hash,
            "after_hash": self.after_hash,
        }


# --- moves ------------------------------------------------------------------


def _direction(direction) -> int:
    if direction in ("positive", "+", 1):
        return 1
    if direction in ("negative", "-", -1):
        return -1
    raise MoveError(f"stabilization direction must be positive or negative, got {direction!r}")


def _get(d: SurgeryDiagram, cid: str) -> SurgeryComponent:
    try:
        return d.component(cid)
    except KeyError:
        raise MoveError(f"unknown component id {cid!r}") from None


def stabilize_component(d: SurgeryDiagram, id: str, direction="positive") -> SurgeryDiagram:
    """``(tb, rot) -> (tb - 1, rot +- 1)``; linking untouched."""
    check(d)
    c = _get(d, id)
    s = _direction(direction)
    return d.replace_component(c.replace(tb=c.tb - 1, rot=c.rot + s))


def ambient_connect_sum(d: SurgeryDiagram, k: int) -> SurgeryDiagram:
    """Disjoint union with the stored diagram of ``xi_k``, k in {-1, 0, 1}."""
    check(d)
    if k not in SPHERE_SUMMANDS:
        raise MoveError(f"no stored sphere summand for k = {k}")
    out = disjoint_union(d, SPHERE_SUMMANDS[k])
    before, after = d3_or_none(d), d3_or_none(out)
    if before is not None and after != before + k:
        raise InvarianceError(f"ambient_connect_sum: d3 shifted by {after - before}, not {k}", d, out)
    return out


def is_pushoff(d: SurgeryDiagram, i: str, j: str) -> list[str]:
    """Violated push-off conditions for ``j`` as the opposite-sign push-off of ``i``."""
    a, b = _get(d, i), _get(d, j)
    out = []
    if i == j:
        return ["a component is not its own push-off"]
    if a.tb != b.tb:
        out.append(f"tb differs ({a.tb} vs {b.tb})")
    if a.rot != b.rot:
        out.append(f"rot differs ({a.rot} vs {b.rot})")
    if d.lk(i, j) != a.tb:
        out.append(f"lk({i},{j}) = {d.lk(i, j)} is not tb = {a.tb}")
    if a.sign != -b.sign:
        out.append("signs are not opposite")
    for k in d.ids:
        if k not in (i, j) and d.lk(i, k) != d.lk(j, k):
            out.append(f"lk with {k} differs ({d.lk(i, k)} vs {d.lk(j, k)})")
    return out


def cancel_pair(d: SurgeryDiagram, i: str, j: str) -> SurgeryDiagram:
    """Delete a Legendrian knot together with its opposite-sign push-off."""
    check(d)
    problems = is_pushoff(d, i, j)
    if problems:
        raise MoveError(f"{j} is not a contact push-off of {i}: " + "; ".join(problems))
    out = d.without(i, j)
    verify(d, out, deletion_map(d, [i, j], out), "cancel_pair")
    return out


def handle_slide(d: SurgeryDiagram, i: str, j: str) -> SurgeryDiagram:
    """Replace ``i`` by its band sum with the contact push-off of ``j``.

    Framing ``f_i + 2 lk(i,j) + f_j`` with the sign of ``i`` kept, rotation
    numbers add, ``lk(i,k)`` gains ``lk(j,k)`` and ``lk(i,j)`` gains ``f_j``.
    """
    check(d)
    if i == j:
        raise MoveError("cannot slide a component over itself")
    a, b = _get(d, i), _get(d, j)
    lij = d.lk(i, j)
    f = a.framing + 2 * lij + b.framing
    lk = d.linking_dict()
    for k in d.ids:
        if k not in (i, j):
            n = d.lk(i, k) + d.lk(j, k)
            lk[(i, k) if i < k else (k, i)] = n
    lk[(i, j) if i < j else (j, i)] = lij + b.framing
    new_i = a.replace(tb=f - a.sign, rot=a.rot + b.rot)
    out = SurgeryDiagram.build([new_i if c.id == i else c for c in d.components], lk)
    ids = d.ids
    t = [[int(r == c) for c in range(len(ids))] for r in range(len(ids))]
    t[ids.index(i)][ids.index(j)] = 1
    verify(d, out, t, "handle_slide")
    return out


def add_meridian(
    d: SurgeryDiagram, i: str, tb_m: int, rot_m: int, sign_m: int, id: str | None = None
) -> SurgeryDiagram:
    """New component linking ``i`` once and nothing else."""
    check(d)
    _get(d, i)
    if (tb_m + rot_m) % 2 == 0:
        raise MoveError(f"meridian tb + rot = {tb_m + rot_m} is even (parity violation)")
    if sign_m not in (1, -1):
        raise MoveError("meridian sign must be +1 or -1")
    mid = id or d.fresh_id(f"{i}m")
    return d.with_component(SurgeryComponent(mid, tb_m, rot_m, sign_m), {i: 1})


def _meridian_problems(d: SurgeryDiagram, i: str, m: str) -> list[str]:
    out = []
    if i == m:
        return ["a component is not its own meridian"]
    if d.lk(i, m) != 1:
        out.append(f"lk({i},{m}) = {d.lk(i, m)}, not 1")
    for k in d.ids:
        if k not in (i, m) and d.lk(m, k):
            out.append(f"{m} links {k}")
    return out


def lemma42_move(d: SurgeryDiagram, i: str, m: str) -> SurgeryDiagram:
    """``L(-1) + U_+-(+1) = L_+-(+1)`` for a tb = -2 meridian ``U_+-`` of ``L``."""
    check(d)
    a, u = _get(d, i), _get(d, m)
    problems = []
    if a.sign != -1:
        problems.append(f"{i} has sign {a.sign:+d}, need -1")
    problems += _meridian_problems(d, i, m)
    if u.tb != -2:
        problems.append(f"meridian tb = {u.tb}, need -2")
    if u.rot not in (1, -1):
        problems.append(f"meridian rot = {u.rot}, need +-1")
    if u.sign != 1:
        problems.append("meridian sign must be +1")
    if problems:
        raise MoveError("lemma42_move: " + "; ".join(problems))
    out = d.without(m).replace_component(a.replace(tb=a.tb - 1, rot=a.rot + u.rot, sign=1))
    verify(d, out, deletion_map(d, [m], out), "lemma42_move")
    return out


def avdek_merge(d: SurgeryDiagram, i: str, m: str) -> SurgeryDiagram:
    """``K(+1)`` with its tb = -1 (+1)-meridian becomes a disjoint xi_1."""
    check(d)
    a, u = _get(d, i), _get(d, m)
    problems = []
    if a.sign != 1:
        problems.append(f"{i} has sign {a.sign:+d}, need +1")
    problems += _meridian_problems(d, i, m)
    if (u.tb, u.rot, u.sign) != (-1, 0, 1):
        problems.append(f"meridian must be tb=-1, rot=0, sign=+1 (got {u.tb}, {u.rot}, {u.sign:+d})")
    linked = [k for k in d.ids if k not in (i, m) and d.lk(i, k)]
    if linked:
        problems.append(
            f"component {i} is linked elsewhere ({', '.join(linked)}) - use invariant-level verification instead"
        )
    if problems:
        raise MoveError("avdek_merge: " + "; ".join(problems))
    out = disjoint_union(d.without(i, m), SPHERE_SUMMANDS[1])
    verify(d, out, deletion_map(d, [i, m], out), "avdek_merge")
    return out


def detour_insert(
    d: SurgeryDiagram, p: int, id: str | None = None, rot: int | None = None
) -> SurgeryDiagram:
    """Append an unlinked (-1)-surgery on a tb = 1 - p unknot (an L(p,1) summand)."""
    check(d)
    if p < 2:
        raise MoveError(f"detour needs p >= 2, got {p}")
    tb = 1 - p
    if rot is None:
        rot = 0 if tb % 2 else 1
    if (tb + rot) % 2 == 0:
        raise MoveError(f"rot = {rot} violates parity for tb = {tb}")
    uid = id or d.fresh_id("U")
    return d.with_component(SurgeryComponent(uid, tb, rot, -1))


def detour_close(d: SurgeryDiagram, u: str, id: str | None = None) -> SurgeryDiagram:
    """Add the tb = -1 (+1)-meridian that cancels a detour unknot."""
    check(d)
    c = _get(d, u)
    linked = [k for k in d.ids if k != u and d.lk(u, k)]
    if linked:
        raise MoveError(f"detour_close: {u} is linked to {', '.join(linked)}")
    if c.sign != -1 or c.tb > -1:
        raise MoveError(f"detour_close: {u} is not a detour unknot (sign -1, tb <= -1)")
    out = add_meridian(d, u, -1, 0, 1, id=id or d.fresh_id(f"{u}m"))
    mid = next(x for x in out.ids if x not in d.ids)
    target = d.without(u)
    verify(out, target, deletion_map(out, [u, mid], target), "detour_close")
    return out


# --- dispatch and replay ----------------------------------------------------

_MOVES: dict[str, Callable[..., SurgeryDiagram]] = {
    "stabilize_component": stabilize_component,
    "ambient_connect_sum": ambient_connect_sum,
    "cancel_pair": cancel_pair,
    "handle_slide": handle_slide,
    "add_meridian": add_meridian,
    "lemma42_move": lemma42_move,
    "avdek_merge": avdek_merge,
    "detour_insert": detour_insert,
    "detour_close": detour_close,
}


def _complete_params(d: SurgeryDiagram, kind: str, params: Mapping) -> dict:
    """Pin generated ids so that a record replays to the same hash."""
    p = dict(params)
    if kind == "add_meridian" and not p.get("id"):
        p["id"] = d.fresh_id(f"{p['i']}m")
    elif kind == "detour_insert" and not p.get("id"):
        p["id"] = d.fresh_id("U")
    elif kind == "detour_close" and not p.get("id"):
        p["id"] = d.fresh_id(f"{p['u']}m")
    return p


def apply_move(d: SurgeryDiagram, kind: str, params: Mapping) -> tuple[SurgeryDiagram, MoveRecord]:
    if kind not in _MOVES:
        raise MoveError(f"unknown move kind {kind!r}")
    p = _complete_params(d, kind, params)
    try:
        out = _MOVES[kind](d, **p)
    except TypeError as exc:
        raise MoveError(f"{kind}: bad parameters {sorted(p)}: {exc}") from None
    return out, MoveRecord(kind, p, d.content_hash(), out.content_hash())


def run_script(
    d: SurgeryDiagram, script: Sequence[Mapping]
) -> tuple[SurgeryDiagram, list[MoveRecord]]:
    records = []
    for step in script:
        d, rec = apply_move(d, step["kind"], step.get("params") or {})
        records.append(rec)
    return d, records


def replay(d: SurgeryDiagram, records: Sequence[MoveRecord]) -> SurgeryDiagram:
    """Re-apply recorded moves, checking every before/after hash."""
    for rec in records:
        if d.content_hash() != rec.before_hash:
            raise MoveError(f"replay: diagram hash does not match the record for {rec.kind}")
        d, _ = apply_move(d, rec.kind, rec.params)
        if d.content_hash() != rec.after_hash:
            raise MoveError(f"replay: {rec.kind} did not reproduce the recorded diagram")
    return d


def d3_shift(before: SurgeryDiagram, after: SurgeryDiagram) -> Fraction | None:
    a, b = d3_or_none(before), d3_or_none(after)
    return None if a is None or b is None else b - a


__all__ = [
    "DiagramError",
    "InvarianceError",
    "MoveError",
    "MoveRecord",
    "MOVE_KINDS",
    "add_meridian",
    "ambient_connect_sum",
    "apply_move",
    "avdek_merge",
    "cancel_pair",
    "deletion_map",
    "detour_close",
    "detour_insert",
    "handle_slide",
    "lemma42_move",
    "replay",
    "run_script",
    "stabilize_component",
    "verify",
]
