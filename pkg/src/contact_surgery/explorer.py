"""Certified finite pieces of the contact surgery graph.

Vertices are keyed by invariants. Only two families are classified, so
only those keys name a contactomorphism class:

* ``TIGHT_S3``: the diagram reduces to the empty diagram;
* ``OT_S3``: trivial homology plus a constructive overtwistedness witness
  (a split summand equal to a stored ``xi_k`` diagram, or a (+1)-surgery
  carrying its tb = -1 (+1)-meridian, which splits off ``xi_1``).

Everything else is ``RHS_GENERIC``: an invariant class, not a certified
contact manifold.

Edges are single added components. A (-1)-surgery from A to B is drawn
A -> B; a (+1)-surgery from A to B is the inverse, drawn B -> A.
"""

from __future__ import annotations

import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .diagram import (
    SurgeryComponent,
    SurgeryDiagram,
    check,
    diagram_to_data,
    extended_matrix,
    parse_diagram,
)
from .invariants import (
    PreconditionError,
    cokernel,
    d3_or_none,
    euler_quotient,
    format_rational,
    homology,
)
from .moves import (
    MoveRecord,
    apply_move,
    deletion_map,
    detour_close,
    detour_insert,
    is_pushoff,
    lemma42_move,
    replay,
    verify,
)
from .standard import SPHERE_SUMMANDS, XI_0, XI_1, xi


class Family(str, Enum):
    OT_S3 = "OT_S3"
    TIGHT_S3 = "TIGHT_S3"
    RHS_GENERIC = "RHS_GENERIC"


_FAMILY_ORDER = {Family.TIGHT_S3: 0, Family.OT_S3: 1, Family.RHS_GENERIC: 2}


@dataclass(frozen=True)
class OTCertificate:
    """How overtwistedness was witnessed.

    ``reductions`` lists the standard-sphere blocks removed first
    (cancelling pairs, Legendrian surgeries capped by a (+1)-meridian,
    conversions ``L(-1) + U(+1) -> L_+-(+1)``);
    ``kind`` is ``"summand"`` (a split copy of ``xi_k``) or ``"avdek"``.
    """

    reductions: tuple[str, ...]
    kind: str
    ids: tuple[str, ...]
    k: int | None = None

    def describe(self) -> str:
        what = f"split xi_{self.k} summand" if self.kind == "summand" else "avdek (+1)-pair"
        pre = f" after {', '.join(self.reductions)}" if self.reductions else ""
        return f"{what} on {', '.join(self.ids)}{pre}"


@dataclass(frozen=True)
class VertexKey:
    family: Family
    torsion: tuple[int, ...]
    free_rank: int
    d3: Fraction | None
    euler: tuple[tuple[int, ...], int]
    ot_certificate: OTCertificate | None = field(default=None, compare=False)

    @property
    def homology_label(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return "+".join(parts) if parts else "0"

    @property
    def label(self) -> str:
        return f"{self.family.value}:{format_rational(self.d3)}:{self.homology_label}"

    def sort_key(self) -> tuple:
        return (
            _FAMILY_ORDER[self.family],
            self.d3 is None,
            self.d3 or 0,
            self.torsion,
            self.free_rank,
            self.euler,
        )

    def invariants(self) -> tuple:
        return (self.torsion, self.free_rank, self.d3, self.euler)

    def to_data(self) -> dict:
        return {
            "family": self.family.value,
            "torsion": list(self.torsion),
            "free_rank": self.free_rank,
            "d3": format_rational(self.d3),
            "euler_quotient": {"torsion": list(self.euler[0]), "free_rank": self.euler[1]},
            "ot_certificate": self.ot_certificate.describe() if self.ot_certificate else None,
        }


# --- classification ---------------------------------------------------------


def _find_cancelling_pair(d: SurgeryDiagram):
    for i in d.ids:
        for j in d.ids:
            if i < j and not is_pushoff(d, i, j):
                return i, j
    return None


def _find_capped_block(d: SurgeryDiagram, sign: int):
    """A sign-``sign`` component with a tb=-1, rot=0 (+1)-meridian linking only it.

    For sign -1 the component must also be split from everything else.
    """
    for m in d.ids:
        c = d.component(m)
        if (c.tb, c.rot, c.sign) != (-1, 0, 1):
            continue
        partners = [k for k in d.ids if k != m and d.lk(m, k)]
        if len(partners) == 1 and d.lk(m, partners[0]) == 1:
            k = partners[0]
            if d.component(k).sign != sign:
                continue
            # a (-1)-surgery is only cancelled by its cap when split from the rest
            if sign < 0 and any(d.lk(k, x) for x in d.ids if x not in (k, m)):
                continue
            return k, m
    return None


def _find_lemma42(d: SurgeryDiagram):
    """A (-1)-surgery with a tb=-2, rot=+-1 (+1)-meridian linking only it."""
    for m in d.ids:
        c = d.component(m)
        if c.tb != -2 or abs(c.rot) != 1 or c.sign != 1:
            continue
        partners = [k for k in d.ids if k != m and d.lk(m, k)]
        if len(partners) == 1 and d.lk(m, partners[0]) == 1 and d.component(partners[0]).sign == -1:
            return partners[0], m
    return None


def reduce_standard_blocks(d: SurgeryDiagram) -> tuple[SurgeryDiagram, tuple[str, ...]]:
    """Strip blocks that each surger to the standard tight sphere.

    Also turns ``L(-1) + U_+-(+1)`` into ``L_+-(+1)``, which can expose a
    split summand. Every step is checked against the full invariant suite.
    """
    steps = []
    while True:
        pair = _find_cancelling_pair(d)
        if pair:
            out = d.without(*pair)
            verify(d, out, deletion_map(d, list(pair), out), "cancel_pair")
            steps.append(f"cancel_pair({pair[0]},{pair[1]})")
            d = out
            continue
        block = _find_capped_block(d, -1)
        if block:
            out = d.without(*block)
            verify(d, out, deletion_map(d, list(block), out), "capped (-1)-surgery")
            steps.append(f"cap({block[0]},{block[1]})")
            d = out
            continue
        conv = _find_lemma42(d)
        if conv:
            d = lemma42_move(d, *conv)
            steps.append(f"lemma42({conv[0]},{conv[1]})")
            continue
        return d, tuple(steps)


def _split_blocks(d: SurgeryDiagram) -> list[tuple[str, ...]]:
    seen: set[str] = set()
    blocks = []
    for start in d.ids:
        if start in seen:
            continue
        stack, block = [start], []
        seen.add(start)
        while stack:
            x = stack.pop()
            block.append(x)
            for y in d.ids:
                if y not in seen and d.lk(x, y):
                    seen.add(y)
                    stack.append(y)
        blocks.append(tuple(sorted(block)))
    return blocks


def _block_data(d: SurgeryDiagram, order: Sequence[str], flip: int) -> tuple:
    comps = tuple((d.component(x).tb, flip * d.component(x).rot, d.component(x).sign) for x in order)
    lks = tuple(d.lk(a, b) for i, a in enumerate(order) for b in order[i + 1 :])
    return comps, lks


def _matches_summand(d: SurgeryDiagram, block: Sequence[str]) -> int | None:
    for k, stored in SPHERE_SUMMANDS.items():
        if len(stored) != len(block):
            continue
        target = _block_data(stored, stored.ids, 1)
        for order in permutations(block):
            for flip in (1, -1):
                if _block_data(d, order, flip) == target:
                    return k
    return None


def find_ot_witness(d: SurgeryDiagram, reductions: tuple[str, ...] = ()) -> OTCertificate | None:
    for block in _split_blocks(d):
        k = _matches_summand(d, block) if len(block) <= 2 else None
        if k is not None:
            return OTCertificate(reductions, "summand", block, k)
    pair = _find_capped_block(d, 1)
    if pair:
        return OTCertificate(reductions, "avdek", pair)
    return None


def classify(d: SurgeryDiagram) -> VertexKey:
    check(d)
    g = homology(d)
    value = d3_or_none(d)
    euler = euler_quotient(d)
    reduced, steps = reduce_standard_blocks(d)
    if not reduced.components:
        return VertexKey(Family.TIGHT_S3, g.torsion, g.free_rank, value, euler)
    cert = find_ot_witness(reduced, steps)
    if cert is not None and g.is_trivial and value is not None and value.denominator == 1:
        return VertexKey(Family.OT_S3, g.torsion, g.free_rank, value, euler, cert)
    return VertexKey(Family.RHS_GENERIC, g.torsion, g.free_rank, value, euler, cert)


# --- certificates -----------------------------------------------------------


class CertificateError(AssertionError):
    pass


@dataclass(frozen=True)
class EdgeCertificate:
    """``source`` plus one contact (+-1)-surgery on ``component``.

    ``rewrite`` turns the witness into the next edge's source (an
    invariant-verified diagram rewrite of the same contact manifold).
    """

    source: SurgeryDiagram
    component: SurgeryComponent
    linking: tuple[tuple[str, int], ...]
    from_key: VertexKey
    to_key: VertexKey
    rewrite: tuple[MoveRecord, ...] = ()

    @property
    def witness(self) -> SurgeryDiagram:
        return self.source.with_component(self.component, dict(self.linking))

    @property
    def sign(self) -> int:
        return self.component.sign

    @property
    def arrow(self) -> tuple[VertexKey, VertexKey]:
        """Graph orientation: tail and head of the directed edge."""
        return (self.from_key, self.to_key) if self.sign < 0 else (self.to_key, self.from_key)

    @property
    def target(self) -> SurgeryDiagram:
        return replay(self.witness, self.rewrite) if self.rewrite else self.witness

    def describe(self) -> str:
        c = self.component
        lk = ", ".join(f"lk({c.id},{k})={n}" for k, n in self.linking if n)
        return f"{c.id}: tb={c.tb} rot={c.rot} ({c.sign:+d})" + (f" [{lk}]" if lk else "")

    def check(self) -> None:
        if classify(self.source) != self.from_key:
            raise CertificateError(f"edge {self.describe()}: source key does not replay")
        if classify(self.witness) != self.to_key:
            raise CertificateError(f"edge {self.describe()}: witness key does not replay")
        self.target  # replays the rewrite records, hash-checked

    def to_data(self) -> dict:
        return {
            "source_hash": self.source.content_hash(),
            "component": {
                "id": self.component.id,
                "tb": self.component.tb,
                "rot": self.component.rot,
                "sign": f"{self.component.sign:+d}",
            },
            "linking": [{"with": k, "lk": n} for k, n in self.linking],
            "witness_hash": self.witness.content_hash(),
            "from": self.from_key.to_data(),
            "to": self.to_key.to_data(),
            "rewrite": [r.to_data() for r in self.rewrite],
        }


def make_edge(
    source: SurgeryDiagram,
    component: SurgeryComponent,
    linking: Mapping[str, int] | None = None,
    rewrite: Sequence[tuple[str, Mapping]] = (),
) -> EdgeCertificate:
    """Build and key an edge; ``rewrite`` is a list of (kind, params) moves."""
    lk = tuple(sorted((k, n) for k, n in (linking or {}).items() if n))
    witness = source.with_component(component, dict(lk))
    records = []
    d = witness
    for kind, params in rewrite:
        d, rec = apply_move(d, kind, params)
        records.append(rec)
    return EdgeCertificate(source, component, lk, classify(source), classify(witness), tuple(records))


@dataclass(frozen=True)
class PathCertificate:
    start: SurgeryDiagram
    edges: tuple[EdgeCertificate, ...] = ()

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def start_key(self) -> VertexKey:
        return self.edges[0].from_key if self.edges else classify(self.start)

    @property
    def end_key(self) -> VertexKey:
        return self.edges[-1].to_key if self.edges else classify(self.start)

    @property
    def end(self) -> SurgeryDiagram:
        return self.edges[-1].target if self.edges else self.start

    def keys(self) -> list[VertexKey]:
        return [self.start_key] + [e.to_key for e in self.edges]

    def interior_keys(self) -> list[VertexKey]:
        return [e.to_key for e in self.edges[:-1]]

    def check(self) -> None:
        """Replay every edge and the chaining between them."""
        d = self.start
        prev_key = classify(self.start)
        for k, e in enumerate(self.edges):
            if e.source != d:
                raise CertificateError(f"edge {k}: source is not the previous vertex diagram")
            if e.from_key != prev_key:
                raise CertificateError(f"edge {k}: from_key differs from the previous to_key")
            e.check()
            d = e.target
            if classify(d) != e.to_key:
                raise CertificateError(f"edge {k}: rewrite changed the vertex key")
            prev_key = e.to_key

    def reversed(self) -> "PathCertificate":
        """Walk back by adding opposite-sign push-offs (cancellation)."""
        if any(e.rewrite for e in self.edges):
            raise CertificateError("only rewrite-free paths can be reversed")
        edges = []
        d = self.end
        for e in reversed(self.edges):
            c = e.component
            pid = d.fresh_id(f"{c.id}*")
            lk = {k: d.lk(c.id, k) for k in d.ids if k != c.id}
            lk[c.id] = c.tb
            dual = SurgeryComponent(pid, c.tb, c.rot, -c.sign)
            edge = make_edge(d, dual, lk, [("cancel_pair", {"i": c.id, "j": pid})])
            edges.append(edge)
            d = edge.target
        return PathCertificate(self.end, tuple(edges))

    def to_data(self) -> dict:
        return {
            "start_hash": self.start.content_hash(),
            "length": len(self),
            "keys": [k.to_data() for k in self.keys()],
            "edges": [e.to_data() for e in self.edges],
        }

    def diagrams(self) -> list[SurgeryDiagram]:
        out = [self.start]
        for e in self.edges:
            out.append(e.witness)
            if e.rewrite:
                out.append(e.target)
        return out


# --- path constructions -----------------------------------------------------


def _xi1_component(d: SurgeryDiagram, stem: str = "u") -> SurgeryComponent:
    c = XI_1.components[0]
    return c.replace(id=d.fresh_id(stem))


def ot_ladder(k_min: int, k_max: int) -> PathCertificate:
    """(+1)-edges xi_k -> xi_{k+1} from ``k_min`` up to ``k_max``."""
    if k_min > k_max:
        raise PreconditionError(f"k_min = {k_min} exceeds k_max = {k_max}")
    d = xi(k_min)
    edges = []
    for k in range(k_min, k_max):
        e = make_edge(d, _xi1_component(d))
        if e.to_key.family is not Family.OT_S3 or e.to_key.d3 != k + 1:
            raise CertificateError(f"ladder step {k} -> {k + 1} landed on {e.to_key.label}")
        edges.append(e)
        d = e.target
    return PathCertificate(xi(k_min), tuple(edges))


def verify_link_theorem(
    base: SurgeryDiagram, component: SurgeryComponent, linking: Mapping[str, int] | None = None
) -> PathCertificate:
    """A path of length <= 2 from the neighbour ``base + component`` to ``base # xi_1``.

    (+1) case: cap the new component with its tb = -1 (+1)-meridian.
    (-1) case: first add a tb = -2, rot = 1 (+1)-meridian and rewrite
    ``L(-1) + U_+(+1)`` to ``L_+(+1)``, then cap as before. The endpoint is
    checked against ``base # xi_1`` through the explicit homology
    identification; a failure raises :class:`moves.InvarianceError`.
    """
    check(base)
    lk = {k: n for k, n in (linking or {}).items() if n}
    neighbour = base.with_component(component, lk)
    check(neighbour)
    k = component.id
    edges = []
    d = neighbour
    if component.sign < 0:
        u = SurgeryComponent(d.fresh_id(f"{k}u"), -2, 1, 1)
        e = make_edge(d, u, {k: 1}, [("lemma42_move", {"i": k, "m": u.id})])
        edges.append(e)
        d = e.target
    m = SurgeryComponent(d.fresh_id(f"{k}m"), -1, 0, 1)
    e = make_edge(d, m, {k: 1})
    edges.append(e)
    target = _connect_xi1(base)
    verify(e.witness, target, deletion_map(e.witness, [k, m.id], target), "link theorem endpoint")
    return PathCertificate(neighbour, tuple(edges))


def _connect_xi1(base: SurgeryDiagram) -> SurgeryDiagram:
    return base.with_component(_xi1_component(base))


def _path_ids(path: PathCertificate) -> set[str]:
    return {cid for d in path.diagrams() for cid in d.ids}


def _fresh(taken: set[str], stem: str) -> str:
    if stem not in taken:
        return stem
    k = 1
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def _transport(
    path: PathCertificate, prefix: SurgeryDiagram, start: SurgeryDiagram
) -> list[EdgeCertificate]:
    """Re-run ``path``'s edges with the split diagram ``prefix`` added everywhere."""
    edges = []
    d = start
    for e in path.edges:
        steps = [(r.kind, r.params) for r in e.rewrite]
        new = make_edge(d, e.component, dict(e.linking), steps)
        edges.append(new)
        d = new.target
    return edges


def verify_detour(
    path: PathCertificate, forbidden: Iterable[VertexKey], p: int
) -> PathCertificate:
    """Reroute ``path`` through ``M_i # L(p,1)``, adding exactly two edges.

    The first edge adds a (-1)-surgery on a tb = 1 - p unknot, the last
    caps it with a tb = -1 (+1)-meridian, which restores the end vertex.
    """
    forbidden = set(forbidden)
    if path.start_key in forbidden or path.end_key in forbidden:
        raise PreconditionError("an endpoint of the path is forbidden")
    if p < 2:
        raise PreconditionError(f"detour needs p >= 2, got {p}")
    taken = _path_ids(path)
    uid = _fresh(taken, "U")
    mid = _fresh(taken | {uid}, f"{uid}m")

    inserted = detour_insert(path.start, p, id=uid)
    u = inserted.component(uid)
    first = make_edge(path.start, u)
    d = first.target
    middle = []
    for e in path.edges:
        steps = [(r.kind, r.params) for r in e.rewrite]
        new = make_edge(d, e.component, dict(e.linking), steps)
        middle.append(new)
        d = new.target
    closed = detour_close(d, uid, id=mid)
    last = make_edge(d, closed.component(mid), {uid: 1})
    out = PathCertificate(path.start, (first, *middle, last))

    for key, vertex in zip(out.interior_keys(), [first.target] + [e.target for e in middle]):
        if key in forbidden:
            raise PreconditionError(f"detour vertex {key.label} is forbidden: increase p")
        _check_lens_summand(vertex, uid, p)
    if out.start_key != path.start_key or out.end_key != path.end_key:
        raise CertificateError("detour changed an endpoint key")
    return out


def _check_lens_summand(d: SurgeryDiagram, uid: str, p: int) -> None:
    u = d.component(uid)
    if u.framing != -p or any(d.lk(uid, k) for k in d.ids if k != uid):
        raise CertificateError(f"{uid} is not a split L({p},1) summand")
    rest = extended_matrix(d.without(uid))
    n = len(rest)
    block = [row + [0] for row in rest] + [[0] * n + [-p]]
    if homology(d).summary != cokernel(block, n + 1).summary:
        raise CertificateError("homology is not H_1(M) + Z/p")


def verify_ot_distance_bound(path: PathCertificate) -> PathCertificate:
    """Prefix ``path`` with a split ``xi_0`` so every interior vertex is overtwisted."""
    if path.start_key.family is not Family.OT_S3 or path.end_key.family is not Family.OT_S3:
        raise PreconditionError("both endpoints must be OT_S3 vertices")
    taken = _path_ids(path)
    names = {}
    for cid in XI_0.ids:
        names[cid] = _fresh(taken | set(names.values()), f"Z{cid}")
    block = XI_0.relabel(names)
    a, b = block.components
    first = make_edge(path.start, a)
    second = make_edge(first.target, b, {a.id: block.lk(a.id, b.id)})
    rest = _transport(path, block, second.target)
    out = PathCertificate(path.start, (first, second, *rest))
    for key in out.interior_keys():
        if key.ot_certificate is None:
            raise CertificateError(f"interior vertex {key.label} has no overtwisted witness")
    if out.start_key != path.start_key or out.end_key != path.end_key:
        raise CertificateError("xi_0 prefix changed an endpoint key")
    return out


# --- subgraph exploration ---------------------------------------------------


@dataclass
class Subgraph:
    vertices: dict[VertexKey, SurgeryDiagram]
    depth: dict[VertexKey, int]
    edges: list[EdgeCertificate]
    truncated: bool = False

    def sorted_vertices(self) -> list[VertexKey]:
        return sorted(self.vertices, key=VertexKey.sort_key)

    def to_dot(self) -> str:
        order = self.sorted_vertices()
        index = {k: f"v{i}" for i, k in enumerate(order)}
        lines = ["digraph contact_surgery {"]
        if self.truncated:
            lines.append('  label="truncated: budget exceeded";')
        for k in order:
            shape = "box" if k.family is Family.RHS_GENERIC else "ellipse"
            lines.append(f'  {index[k]} [label="{k.label}", shape={shape}];')
        seen = set()
        for e in self.edges:
            tail, head = e.arrow
            c = e.component
            label = f"tb={c.tb} rot={c.rot} ({c.sign:+d})"
            line = f'  {index[tail]} -> {index[head]} [label="{label}"];'
            if line not in seen:
                seen.add(line)
                lines.append(line)
        if any(k.family is Family.RHS_GENERIC for k in order):
            lines.append('  note [shape=note, label="boxes are invariant-class vertices"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_data(self) -> dict:
        order = self.sorted_vertices()
        return {
            "truncated": self.truncated,
            "vertices": [
                {
                    "key": k.to_data(),
                    "depth": self.depth[k],
                    "diagram": diagram_to_data(self.vertices[k]),
                    "certified": k.family is not Family.RHS_GENERIC,
                }
                for k in order
            ],
            "edges": [e.to_data() for e in self.edges],
        }


def build_subgraph(
    seeds: Sequence[SurgeryDiagram],
    generators: Sequence[SurgeryComponent],
    depth: int,
    max_vertices: int = 10_000,
) -> Subgraph:
    """Breadth-first closure of ``seeds`` under adding split generator components."""
    vertices: dict[VertexKey, SurgeryDiagram] = {}
    level: dict[VertexKey, int] = {}
    edges: list[EdgeCertificate] = []
    truncated = False
    for s in seeds:
        key = classify(s)
        if key not in vertices:
            vertices[key] = s
            level[key] = 0
    frontier = sorted(vertices, key=VertexKey.sort_key)
    for step in range(1, depth + 1):
        new_keys = []
        for key in frontier:
            d = vertices[key]
            for g in generators:
                comp = g.replace(id=d.fresh_id("G"))
                e = make_edge(d, comp)
                if e.to_key not in vertices:
                    if len(vertices) >= max_vertices:
                        truncated = True
                        continue
                    vertices[e.to_key] = e.witness
                    level[e.to_key] = step
                    new_keys.append(e.to_key)
                edges.append(e)
        frontier = sorted(new_keys, key=VertexKey.sort_key)
    return Subgraph(vertices, level, edges, truncated)


def darboux_generators(
    t_max: int = 6, rot_bound: int | None = None, signs: Sequence[int] = (1, -1)
) -> list[SurgeryComponent]:
    """Unknot generators with tb in [-t_max, -1] and realizable rot."""
    out = []
    for tb in range(-1, -t_max - 1, -1):
        bound = -tb - 1 if rot_bound is None else min(-tb - 1, rot_bound)
        for rot in range(-bound, bound + 1):
            if (tb + rot) % 2:
                for s in signs:
                    out.append(SurgeryComponent("G", tb, rot, s))
    return out


# --- bundles ----------------------------------------------------------------


def write_bundle(directory: str, path: PathCertificate | None = None, graph: Subgraph | None = None) -> str:
    """Write diagram documents plus an ``index.json``; returns the index path."""
    os.makedirs(directory, exist_ok=True)
    docs = {}
    if path is not None:
        for d in path.diagrams():
            docs[d.content_hash()] = d
    if graph is not None:
        for d in graph.vertices.values():
            docs[d.content_hash()] = d
        for e in graph.edges:
            docs[e.witness.content_hash()] = e.witness
            docs[e.source.content_hash()] = e.source
    for h, d in sorted(docs.items()):
        with open(os.path.join(directory, f"{h[:16]}.diagram"), "w") as fh:
            fh.write(d.to_text())
    index = {
        "diagrams": {h: f"{h[:16]}.diagram" for h in sorted(docs)},
        "path": path.to_data() if path is not None else None,
        "graph": graph.to_data() if graph is not None else None,
    }
    out = os.path.join(directory, "index.json")
    with open(out, "w") as fh:
        json.dump(index, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def read_path_bundle(directory: str) -> PathCertificate:
    """Rebuild a path certificate from a bundle, re-running every edge and rewrite."""
    with open(os.path.join(directory, "index.json")) as fh:
        index = json.load(fh)
    data = index.get("path")
    if not data:
        raise CertificateError(f"{directory}: bundle holds no path certificate")

    def load(h: str) -> SurgeryDiagram:
        name = index["diagrams"].get(h)
        if name is None:
            raise CertificateError(f"{directory}: missing diagram {h[:16]}")
        with open(os.path.join(directory, name)) as fh:
            return parse_diagram(fh.read(), os.path.join(directory, name))

    d = load(data["start_hash"])
    edges = []
    for k, rec in enumerate(data["edges"]):
        c = rec["component"]
        comp = SurgeryComponent(c["id"], c["tb"], c["rot"], int(c["sign"]))
        lk = {x["with"]: x["lk"] for x in rec["linking"]}
        steps = [(r["kind"], r["params"]) for r in rec["rewrite"]]
        e = make_edge(d, comp, lk, steps)
        if e.source.content_hash() != rec["source_hash"] or e.witness.content_hash() != rec["witness_hash"]:
            raise CertificateError(f"{directory}: edge {k} does not replay to its recorded hashes")
        edges.append(e)
        d = e.target
    return PathCertificate(load(data["start_hash"]), tuple(edges))


def key_counts(graph: Subgraph) -> dict[str, int]:
    out: dict[str, int] = defaultdict(int)
    for k in graph.vertices:
        out[k.family.value] += 1
    return dict(out)
