"""Seeded random diagrams and move instances.

Everything takes a ``random.Random`` so suites are reproducible from a
single seed. Components are abstract Legendrian knots: only the parity of
``tb + rot`` is enforced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .diagram import SurgeryComponent, SurgeryDiagram
from .explorer import PathCertificate, VertexKey, classify, ot_ladder, verify_link_theorem
from .invariants import characteristic_sublinks
from .moves import detour_insert


@dataclass(frozen=True)
class DiagramBounds:
    n_min: int = 0
    n_max: int = 6
    tb_min: int = -6
    tb_max: int = 2
    lk_max: int = 3
    rot_max: int = 5
    link_prob: float = 0.5


def random_component(rng: random.Random, cid: str, b: DiagramBounds = DiagramBounds(), sign=None):
    tb = rng.randint(b.tb_min, b.tb_max)
    rots = [r for r in range(-b.rot_max, b.rot_max + 1) if (tb + r) % 2]
    return SurgeryComponent(cid, tb, rng.choice(rots), sign if sign is not None else rng.choice((1, -1)))


def random_linking_row(rng: random.Random, ids, b: DiagramBounds = DiagramBounds()) -> dict[str, int]:
    return {
        k: rng.randint(-b.lk_max, b.lk_max) if rng.random() < b.link_prob else 0 for k in ids
    }


def random_diagram(rng: random.Random, b: DiagramBounds = DiagramBounds(), n: int | None = None) -> SurgeryDiagram:
    n = rng.randint(b.n_min, b.n_max) if n is None else n
    ids = [f"c{k}" for k in range(n)]
    comps = [random_component(rng, cid, b) for cid in ids]
    lk = {}
    for i, a in enumerate(ids):
        for c in ids[i + 1 :]:
            if rng.random() < b.link_prob:
                lk[(a, c)] = rng.randint(-b.lk_max, b.lk_max)
    return SurgeryDiagram.build(comps, lk)


def _smaller(b: DiagramBounds, extra: int) -> DiagramBounds:
    return DiagramBounds(
        max(b.n_min, 0), max(b.n_max - extra, 0), b.tb_min, b.tb_max, b.lk_max, b.rot_max, b.link_prob
    )


# --- move instances ---------------------------------------------------------


def pushoff(d: SurgeryDiagram, i: str, pid: str | None = None) -> SurgeryDiagram:
    c = d.component(i)
    pid = pid or d.fresh_id(f"{i}p")
    lk = {k: d.lk(i, k) for k in d.ids if k != i}
    lk[i] = c.tb
    return d.with_component(SurgeryComponent(pid, c.tb, c.rot, -c.sign), lk)


def cancel_pair_instance(rng: random.Random, b: DiagramBounds = DiagramBounds()):
    d = random_diagram(rng, _smaller(b, 1))
    if not d.components:
        d = random_diagram(rng, b, n=1)
    i = rng.choice(d.ids)
    j = d.fresh_id(f"{i}p")
    return pushoff(d, i, j), {"i": i, "j": j}


def handle_slide_instance(rng: random.Random, b: DiagramBounds = DiagramBounds()):
    d = random_diagram(rng, b, n=rng.randint(max(2, b.n_min), max(2, b.n_max)))
    i, j = rng.sample(d.ids, 2)
    return d, {"i": i, "j": j}


def lemma42_instance(rng: random.Random, b: DiagramBounds = DiagramBounds()):
    d = random_diagram(rng, _smaller(b, 1))
    if not d.components:
        d = random_diagram(rng, b, n=1)
    i = rng.choice(d.ids)
    d = d.replace_component(d.component(i).replace(sign=-1))
    m = d.fresh_id(f"{i}m")
    d = d.with_component(SurgeryComponent(m, -2, rng.choice((1, -1)), 1), {i: 1})
    return d, {"i": i, "m": m}


def avdek_instance(rng: random.Random, b: DiagramBounds = DiagramBounds()):
    d = random_diagram(rng, _smaller(b, 2))
    k = random_component(rng, d.fresh_id("K"), b, sign=1)
    d = d.with_component(k)
    m = d.fresh_id(f"{k.id}m")
    d = d.with_component(SurgeryComponent(m, -1, 0, 1), {k.id: 1})
    return d, {"i": k.id, "m": m}


MOVE_INSTANCES = {
    "cancel_pair": cancel_pair_instance,
    "handle_slide": handle_slide_instance,
    "lemma42_move": lemma42_instance,
    "avdek_merge": avdek_instance,
}


def gamma_instance(rng: random.Random, b: DiagramBounds = DiagramBounds()):
    """``(base, extra, linking, sublink)`` that may or may not meet the preconditions.

    Half are Darboux-ball extras with framing +-1, half are opposite-sign
    push-offs of a component outside the chosen sublink.
    """
    base = random_diagram(rng, _smaller(b, 1))
    subs = characteristic_sublinks(base)
    if not subs:
        return None
    sub = rng.choice(subs)
    eid = base.fresh_id("x")
    if rng.random() < 0.5 or not base.components:
        sign = rng.choice((1, -1))
        tb = rng.choice((1, -1)) - sign
        rots = [r for r in range(-b.rot_max, b.rot_max + 1) if (tb + r) % 2]
        return base, SurgeryComponent(eid, tb, rng.choice(rots), sign), {}, sub
    outside = [x for x in base.ids if x not in sub] or list(base.ids)
    i = rng.choice(outside)
    c = base.component(i)
    lk = {k: base.lk(i, k) for k in base.ids if k != i}
    lk[i] = c.tb
    return base, SurgeryComponent(eid, c.tb, c.rot, -c.sign), lk, sub


# --- explorer instances -----------------------------------------------------


def link_theorem_instance(rng: random.Random, b: DiagramBounds = DiagramBounds(n_max=4)):
    base = random_diagram(rng, b)
    comp = random_component(rng, base.fresh_id("N"), b)
    return base, comp, random_linking_row(rng, base.ids, b)


def random_path(rng: random.Random) -> PathCertificate:
    """A ladder segment, its reversal, or a link-theorem path."""
    kind = rng.random()
    if kind < 0.4:
        a = rng.randint(-3, 3)
        return ot_ladder(a, a + rng.randint(0, 3))
    if kind < 0.6:
        a = rng.randint(-2, 2)
        return ot_ladder(a, a + rng.randint(0, 2)).reversed()
    base, comp, lk = link_theorem_instance(rng, DiagramBounds(n_max=3))
    return verify_link_theorem(base, comp, lk)


def forbidden_keys(rng: random.Random, path: PathCertificate, pool: int = 6) -> set[VertexKey]:
    """Keys near the path but off its endpoints: interior vertices and nearby ladder rungs."""
    ends = {path.start_key, path.end_key}
    candidates = set(path.keys()) | set(ot_ladder(-3, 3).keys()) | {classify(SurgeryDiagram())}
    # keys a small-p detour would pass through, so some instances must raise p
    for q in (2, 3):
        candidates.add(classify(detour_insert(path.start, q)))
    candidates -= ends
    ordered = sorted(candidates, key=VertexKey.sort_key)
    return set(rng.sample(ordered, min(len(ordered), rng.randint(0, pool))))
