"""Contact (+-1)-surgery diagrams in the standard contact 3-sphere.

A diagram is pure combinatorial data: per component the classical
invariants ``tb`` and ``rot`` plus the contact surgery sign, and pairwise
linking numbers. No front projection is stored, and knot types beyond
linking data are not tracked.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import yaml

from .linalg import Matrix


class DiagramError(ValueError):
    """A diagram violates a well-formedness invariant."""


class DiagramParseError(DiagramError):
    """A diagram document could not be parsed."""


@dataclass(frozen=True)
class SurgeryComponent:
    id: str
    tb: int
    rot: int
    sign: int

    @property
    def framing(self) -> int:
        """Smooth surgery framing ``tb + sign``."""
        return self.tb + self.sign

    def replace(self, **changes) -> "SurgeryComponent":
        return SurgeryComponent(**{**self.__dict__, **changes})


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class SurgeryDiagram:
    """Components in canonical (lexicographic id) order plus linking numbers.

    ``linking`` maps unordered id pairs ``(a, b)`` with ``a < b`` to nonzero
    linking numbers; absent pairs link zero times. Construction normalizes
    the input but does not validate it: see :func:`validate`.
    """

    components: tuple[SurgeryComponent, ...] = ()
    linking: tuple[tuple[tuple[str, str], int], ...] = ()
    _lk: dict = field(init=False, repr=False, compare=False, hash=False)
    _asymmetric: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda c: c.id))
        given: dict[tuple[str, str], int] = {}
        asym = []
        for (a, b), n in self.linking:
            p = _pair(a, b)
            if p in given and given[p] != n:
                asym.append(p)
            given[p] = n
        lk = {p: n for p, n in given.items() if n}
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "linking", tuple(sorted(lk.items())))
        object.__setattr__(self, "_lk", lk)
        object.__setattr__(self, "_asymmetric", tuple(sorted(set(asym))))

    @classmethod
    def from_matrix(
        cls, components: Iterable[SurgeryComponent], lk: Matrix
    ) -> "SurgeryDiagram":
        """Components in the given order and a full linking matrix (diagonal ignored)."""
        comps = tuple(components)
        entries = [
            ((comps[i].id, comps[j].id), lk[i][j])
            for i in range(len(comps))
            for j in range(len(comps))
            if i != j
        ]
        return cls(comps, tuple(entries))

    @classmethod
    def build(
        cls,
        components: Iterable[SurgeryComponent],
        linking: Mapping[tuple[str, str], int] | Iterable = (),
    ) -> "SurgeryDiagram":
        items = linking.items() if isinstance(linking, Mapping) else linking
        return cls(tuple(components), tuple(((a, b), n) for (a, b), n in items))

    def __len__(self) -> int:
        return len(self.components)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def component(self, cid: str) -> SurgeryComponent:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(f"no component with id {cid!r}")

    def index(self, cid: str) -> int:
        return self.ids.index(cid)

    def lk(self, a: str, b: str) -> int:
        return self._lk.get(_pair(a, b), 0)

    def linking_dict(self) -> dict[tuple[str, str], int]:
        return dict(self._lk)

    def fresh_id(self, stem: str = "K") -> str:
        taken = set(self.ids)
        if stem not in taken:
            return stem
        k = 1
        while f"{stem}{k}" in taken:
            k += 1
        return f"{stem}{k}"

    def with_component(
        self, comp: SurgeryComponent, linking: Mapping[str, int] | None = None
    ) -> "SurgeryDiagram":
        """Append ``comp`` with the given linking numbers to existing ids."""
        if comp.id in self.ids:
            raise DiagramError(f"duplicate component id {comp.id!r}")
        lk = self.linking_dict()
        for other, n in (linking or {}).items():
            if other not in self.ids:
                raise KeyError(f"no component with id {other!r}")
            lk[_pair(comp.id, other)] = n
        return SurgeryDiagram.build(self.components + (comp,), lk)

    def without(self, *ids: str) -> "SurgeryDiagram":
        drop = set(ids)
        for cid in drop:
            self.component(cid)
        comps = [c for c in self.components if c.id not in drop]
        lk = {p: n for p, n in self._lk.items() if not drop.intersection(p)}
        return SurgeryDiagram.build(comps, lk)

    def replace_component(self, comp: SurgeryComponent) -> "SurgeryDiagram":
        self.component(comp.id)
        comps = [comp if c.id == comp.id else c for c in self.components]
        return SurgeryDiagram.build(comps, self._lk)

    def relabel(self, mapping: Mapping[str, str]) -> "SurgeryDiagram":
        comps = [c.replace(id=mapping.get(c.id, c.id)) for c in self.components]
        lk = {(mapping.get(a, a), mapping.get(b, b)): n for (a, b), n in self._lk.items()}
        return SurgeryDiagram.build(comps, lk)

    def rot_vector(self) -> list[int]:
        return [c.rot for c in self.components]

    def to_text(self) -> str:
        return dump_diagram(self)

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


EMPTY = SurgeryDiagram()


def validate(d: SurgeryDiagram) -> list[str]:
    """All invariant violations of ``d``; empty iff well formed."""
    out: list[str] = []
    seen: set[str] = set()
    for c in d.components:
        if c.id in seen:
            out.append(f"component {c.id}: duplicate id")
        seen.add(c.id)
        if not isinstance(c.id, str) or not c.id:
            out.append(f"component {c.id!r}: id must be a nonempty string")
        if c.sign not in (1, -1):
            out.append(f"component {c.id}: contact surgery coefficient {c.sign} is not +1 or -1")
        if (c.tb + c.rot) % 2 == 0:
            out.append(f"component {c.id}: tb + rot = {c.tb + c.rot} is even (parity violation)")
    for a, b in d._asymmetric:
        out.append(f"linking ({a}, {b}): asymmetric entries lk(a,b) != lk(b,a)")
    for (a, b), _ in d.linking:
        if a == b:
            out.append(f"linking ({a}, {b}): self-linking entry; framing lives in tb")
        for x in (a, b):
            if x not in seen:
                out.append(f"linking ({a}, {b}): unknown component {x}")
    return out


def check(d: SurgeryDiagram) -> SurgeryDiagram:
    problems = validate(d)
    if problems:
        raise DiagramError("; ".join(problems))
    return d


def extended_matrix(d: SurgeryDiagram) -> Matrix:
    """Linking matrix with smooth framings ``tb + sign`` on the diagonal."""
    check(d)
    ids = d.ids
    return [
        [c.framing if i == j else d.lk(c.id, ids[j]) for j in range(len(ids))]
        for i, c in enumerate(d.components)
    ]


def disjoint_union(d1: SurgeryDiagram, d2: SurgeryDiagram) -> SurgeryDiagram:
    """Split union; ``d2``'s ids are renamed (primed) where they collide."""
    check(d1)
    check(d2)
    taken = set(d1.ids)
    mapping: dict[str, str] = {}
    for cid in d2.ids:
        new = cid
        while new in taken:
            new += "'"
        taken.add(new)
        mapping[cid] = new
    d2 = d2.relabel(mapping)
    lk = d1.linking_dict()
    lk.update(d2.linking_dict())
    return SurgeryDiagram.build(d1.components + d2.components, lk)


# --- text format ---------------------------------------------------------


def _fmt_sign(s: int) -> str:
    return "+1" if s > 0 else "-1"


def dump_diagram(d: SurgeryDiagram) -> str:
    """Canonical YAML text; re-parses to an equal diagram."""
    lines = ["components:" if d.components else "components: []"]
    for c in d.components:
        lines.append(
            f"  - {{id: {_quote(c.id)}, tb: {c.tb}, rot: {c.rot}, sign: {_fmt_sign(c.sign)}}}"
        )
    lines.append("linking:" if d.linking else "linking: []")
    for (a, b), n in d.linking:
        lines.append(f"  - {{a: {_quote(a)}, b: {_quote(b)}, lk: {n}}}")
    return "\n".join(lines) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _parse_sign(value, what: str = "sign") -> int:
    if isinstance(value, str):
        value = value.strip()
        if value in ("+1", "-1"):
            return int(value)
    elif isinstance(value, int) and not isinstance(value, bool) and value in (1, -1):
        return value
    raise DiagramParseError(f"{what} must be +1 or -1, got {value!r}")


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DiagramParseError(f"{what} must be an integer, got {value!r}")
    return value


def diagram_from_data(data) -> SurgeryDiagram:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise DiagramParseError("diagram document must be a mapping")
    unknown = set(data) - {"components", "linking"}
    if unknown:
        raise DiagramParseError(f"unknown top-level fields: {sorted(unknown)}")
    comps = []
    for k, rec in enumerate(data.get("components") or []):
        if not isinstance(rec, dict) or set(rec) != {"id", "tb", "rot", "sign"}:
            raise DiagramParseError(f"components[{k}]: expected fields id, tb, rot, sign")
        comps.append(
            SurgeryComponent(
                id=str(rec["id"]),
                tb=_int(rec["tb"], f"components[{k}].tb"),
                rot=_int(rec["rot"], f"components[{k}].rot"),
                sign=_parse_sign(rec["sign"], f"components[{k}].sign"),
            )
        )
    lk: dict[tuple[str, str], int] = {}
    for k, rec in enumerate(data.get("linking") or []):
        if not isinstance(rec, dict) or set(rec) != {"a", "b", "lk"}:
            raise DiagramParseError(f"linking[{k}]: expected fields a, b, lk")
        pair = _pair(str(rec["a"]), str(rec["b"]))
        if pair in lk:
            raise DiagramParseError(f"linking[{k}]: pair {pair} listed twice")
        lk[pair] = _int(rec["lk"], f"linking[{k}].lk")
    ids = [c.id for c in comps]
    if len(set(ids)) != len(ids):
        raise DiagramParseError("component ids are not unique")
    return SurgeryDiagram.build(comps, lk)


def parse_diagram(text: str, source: str = "<string>") -> SurgeryDiagram:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise DiagramParseError(f"{where}: {getattr(exc, 'problem', exc)}") from exc
    try:
        return diagram_from_data(data)
    except DiagramParseError as exc:
        raise DiagramParseError(f"{source}: {exc}") from exc


def diagram_to_data(d: SurgeryDiagram) -> dict:
    return {
        "components": [
            {"id": c.id, "tb": c.tb, "rot": c.rot, "sign": _fmt_sign(c.sign)} for c in d.components
        ],
        "linking": [{"a": a, "b": b, "lk": n} for (a, b), n in d.linking],
    }
