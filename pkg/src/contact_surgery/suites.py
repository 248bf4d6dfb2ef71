"""Verification suites, one per acceptance criterion.

Each suite returns a :class:`SuiteResult`; nothing here raises on a failed
check, failures are collected (with the offending diagram text) instead.
Budgets come from :class:`SuiteConfig`, which reads environment variables:

``CS_INSTANCES``  property instances per move (default 1000)
``CS_DEPTH``      subgraph depth limit (default 4)
``CS_T``          generator tb range [-T, -1] (default 6)
``CS_SEED``       master seed (default 0)
"""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .diagram import EMPTY, extended_matrix
from .explorer import (
    Family,
    PathCertificate,
    build_subgraph,
    classify,
    darboux_generators,
    ot_ladder,
    verify_detour,
    verify_link_theorem,
    verify_ot_distance_bound,
)
from .generators import (
    MOVE_INSTANCES,
    forbidden_keys,
    gamma_instance,
    link_theorem_instance,
    random_diagram,
    random_path,
    DiagramBounds,
)
from .invariants import (
    PreconditionError,
    characteristic_sublinks,
    d3,
    euler_class,
    gamma_difference,
    homology,
    mod2_nullity,
)
from .linalg import signature, smith_normal_form
from .moves import InvarianceError, apply_move, detour_close, detour_insert
from .oracles import characteristic_subsets, descartes_signature, invariant_factors
from .standard import XI_1, xi


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw not in (None, "") else default


@dataclass(frozen=True)
class SuiteConfig:
    move_instances: int = 1000
    gamma_instances: int = 500
    char_instances: int = 500
    link_instances: int = 200
    detour_instances: int = 100
    ot_instances: int = 40
    n4_samples: int = 400
    depth: int = 4
    t_max: int = 6
    seed: int = 0

    @classmethod
    def from_env(cls) -> "SuiteConfig":
        return cls(
            move_instances=max(1000, _env_int("CS_INSTANCES", 1000)),
            depth=_env_int("CS_DEPTH", 4),
            t_max=_env_int("CS_T", 6),
            seed=_env_int("CS_SEED", 0),
        )

    def rng(self, salt: int) -> random.Random:
        return random.Random(self.seed * 1_000_003 + salt)


@dataclass
class SuiteResult:
    number: int
    name: str
    passed: bool = True
    count: int = 0
    seconds: float = 0.0
    limit: float = 0.0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.passed = False
        if len(self.failures) < 20:
            self.failures.append(msg)

    def short(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.name}"

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; {self.notes[0]}" if self.notes else ""
        return (
            f"[{status}] criterion {self.number:2d} {self.name}: {self.count} checks, "
            f"{self.seconds:.2f}s (limit {self.limit:g}s){extra}"
        )


def _timed(number: int, name: str, limit: float):
    def wrap(fn: Callable[[SuiteResult, SuiteConfig], None]):
        def run(cfg: SuiteConfig | None = None) -> SuiteResult:
            cfg = cfg or SuiteConfig.from_env()
            res = SuiteResult(number, name, limit=limit)
            t0 = time.perf_counter()
            try:
                fn(res, cfg)
            except Exception as exc:  # a crash is a failure, reported not hidden
                res.fail(f"{type(exc).__name__}: {exc}")
            res.seconds = time.perf_counter() - t0
            if res.seconds >= limit:
                res.fail(f"runtime {res.seconds:.2f}s exceeds {limit}s")
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@_timed(1, "exact d3 values", 1.0)
def exact_values(res: SuiteResult, cfg: SuiteConfig) -> None:
    """d3 of the empty diagram and of (+1)-surgery on the tb=-2 unknot."""
    for d, want in ((EMPTY, Fraction(0)), (XI_1, Fraction(1))):
        got = d3(d)
        res.count += 1
        if not (isinstance(got, Fraction) and got == want):
            res.fail(f"d3 = {got!r}, expected {want}\n{d.to_text()}")


@_timed(2, "lens-space detour", 5.0)
def lens_detour(res: SuiteResult, cfg: SuiteConfig) -> None:
    for p in range(2, 51):
        d = detour_insert(EMPTY, p, id="U")
        if homology(d).order != p:
            res.fail(f"p = {p}: |H1| = {homology(d).order}")
        closed = detour_close(d, "U")
        if not homology(closed).is_trivial or d3(closed) != 0 or not euler_class(closed).is_zero:
            res.fail(f"p = {p}: insert + close does not restore the standard sphere\n{closed.to_text()}")
        res.count += 1


@_timed(3, "move invariance", 60.0)
def move_invariance(res: SuiteResult, cfg: SuiteConfig) -> None:
    for salt, (kind, gen) in enumerate(MOVE_INSTANCES.items()):
        rng = cfg.rng(300 + salt)
        for _ in range(cfg.move_instances):
            d, params = gen(rng)
            try:
                apply_move(d, kind, params)
            except InvarianceError as exc:
                res.fail(f"{kind} {params}: {exc}")
            except PreconditionError as exc:
                res.fail(f"{kind} {params}: generator produced a rejected instance: {exc}\n{d.to_text()}")
            res.count += 1
    res.notes.append(f"{cfg.move_instances} instances x {len(MOVE_INSTANCES)} moves")


@_timed(4, "Gamma-difference nullity", 30.0)
def gamma_nullity(res: SuiteResult, cfg: SuiteConfig) -> None:
    rng = cfg.rng(400)
    rejected = 0
    while res.count < cfg.gamma_instances:
        inst = gamma_instance(rng)
        if inst is None:
            continue
        try:
            value = gamma_difference(*inst)
        except PreconditionError:
            rejected += 1
            continue
        res.count += 1
        if not value.is_zero:
            base, extra, lk, sub = inst
            res.fail(f"nonzero difference {value.reduced} for extra {extra} lk {lk} J {sorted(sub)}\n{base.to_text()}")
    res.notes.append(f"{rejected} generated instances failed the preconditions")


@_timed(5, "characteristic sublink count", 30.0)
def characteristic_count(res: SuiteResult, cfg: SuiteConfig) -> None:
    rng = cfg.rng(500)
    bounds = DiagramBounds(n_min=1, n_max=10)
    for _ in range(cfg.char_instances):
        d = random_diagram(rng, bounds)
        subs = characteristic_sublinks(d)
        want = 2 ** mod2_nullity(d)
        brute = {frozenset(d.ids[k] for k in s) for s in characteristic_subsets(extended_matrix(d))}
        if len(subs) != want or set(subs) != brute:
            res.fail(f"{len(subs)} sublinks, 2^nullity = {want}, exhaustive {len(brute)}\n{d.to_text()}")
        res.count += 1


@_timed(6, "OT ladder", 5.0)
def ladder(res: SuiteResult, cfg: SuiteConfig) -> None:
    path = ot_ladder(0, 10)
    path.check()
    if len(path) != 10:
        res.fail(f"ladder has {len(path)} edges")
    for k, e in enumerate(path.edges, start=1):
        res.count += 1
        if e.sign != 1 or e.to_key.d3 != k or e.to_key.family is not Family.OT_S3:
            res.fail(f"edge {k}: sign {e.sign:+d}, lands on {e.to_key.label}")
    back = path.reversed()
    back.check()
    for k, e in enumerate(back.edges):
        res.count += 1
        if e.sign != -1 or e.to_key.d3 != 9 - k:
            res.fail(f"reversed edge {k}: sign {e.sign:+d}, lands on {e.to_key.label}")


@_timed(7, "link theorem", 60.0)
def link_theorem(res: SuiteResult, cfg: SuiteConfig) -> None:
    rng = cfg.rng(700)
    lengths = {1: 0, 2: 0}
    for _ in range(cfg.link_instances):
        base, comp, lk = link_theorem_instance(rng)
        try:
            path = verify_link_theorem(base, comp, lk)
            path.check()
        except (InvarianceError, AssertionError) as exc:
            res.fail(str(exc))
            continue
        res.count += 1
        if len(path) > 2:
            res.fail(f"path of length {len(path)}")
        lengths[len(path)] = lengths.get(len(path), 0) + 1
        target = classify(base.with_component(XI_1.components[0].replace(id=base.fresh_id("u"))))
        if path.end_key != target:
            res.fail(f"end key {path.end_key.label} differs from {target.label}")
    res.notes.append(f"lengths {lengths}")


@_timed(8, "detour bound", 60.0)
def detour_bound(res: SuiteResult, cfg: SuiteConfig) -> None:
    rng = cfg.rng(800)
    bumped = 0
    while res.count < cfg.detour_instances:
        path = random_path(rng)
        forbidden = forbidden_keys(rng, path)
        p = rng.randint(2, 6)
        for _ in range(10):
            try:
                out = verify_detour(path, forbidden, p)
                break
            except PreconditionError as exc:
                if "increase p" not in str(exc):
                    raise
                p += 1
                bumped += 1
        else:
            res.fail("no p in range avoided the forbidden keys")
            continue
        out.check()
        res.count += 1
        if len(out) != len(path) + 2:
            res.fail(f"length {len(out)} from {len(path)}")
        hit = [k.label for k in out.interior_keys() if k in forbidden]
        if hit:
            res.fail(f"interior keys hit forbidden: {hit}")
        if (out.start_key, out.end_key) != (path.start_key, path.end_key):
            res.fail("endpoint keys changed")
    res.notes.append(f"p increased {bumped} times")


@_timed(9, "OT distance bound", 10.0)
def ot_distance(res: SuiteResult, cfg: SuiteConfig) -> None:
    rng = cfg.rng(900)
    paths: list[PathCertificate] = [PathCertificate(xi(1)), ot_ladder(1, 3)]
    while len(paths) < cfg.ot_instances:
        a = rng.randint(-3, 3)
        path = ot_ladder(a, a + rng.randint(0, 3))
        paths.append(path.reversed() if rng.random() < 0.5 else path)
    for path in paths:
        out = verify_ot_distance_bound(path)
        out.check()
        res.count += 1
        if len(out) != len(path) + 2:
            res.fail(f"length {len(out)} from {len(path)}")
        if any(k.ot_certificate is None for k in out.interior_keys()):
            res.fail("an interior vertex lacks an overtwisted witness")


@_timed(10, "oracle equivalence", 120.0)
def oracle_equivalence(res: SuiteResult, cfg: SuiteConfig) -> None:
    def one(q):
        diag, _, _ = smith_normal_form(q)
        facs = sorted(x for x in diag if x != 1)
        want = sorted(x for x in invariant_factors(q) if x != 1)
        if facs != want:
            res.fail(f"SNF {diag} vs oracle {invariant_factors(q)} for {q}")
        if signature(q) != descartes_signature(q):
            res.fail(f"signature {signature(q)} vs oracle {descartes_signature(q)} for {q}")
        res.count += 1

    for n in range(1, 4):
        slots = [(i, j) for i in range(n) for j in range(i, n)]
        for values in product(range(-2, 3), repeat=len(slots)):
            q = [[0] * n for _ in range(n)]
            for (i, j), v in zip(slots, values):
                q[i][j] = q[j][i] = v
            one(q)
    rng = cfg.rng(1000)
    for _ in range(cfg.n4_samples):
        q = [[0] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                q[i][j] = q[j][i] = rng.randint(-3, 3)
        one(q)


@_timed(0, "subgraph smoke", 60.0)
def subgraph_smoke(res: SuiteResult, cfg: SuiteConfig) -> None:
    """Not a criterion: the configured budgets produce a deterministic export."""
    gens = darboux_generators(min(cfg.t_max, 3), rot_bound=1)
    g1 = build_subgraph([EMPTY], gens, min(cfg.depth, 2), max_vertices=500)
    g2 = build_subgraph([EMPTY], gens, min(cfg.depth, 2), max_vertices=500)
    res.count = len(g1.vertices)
    if g1.to_dot() != g2.to_dot():
        res.fail("subgraph export is not deterministic")


CRITERIA = [
    exact_values,
    lens_detour,
    move_invariance,
    gamma_nullity,
    characteristic_count,
    ladder,
    link_theorem,
    detour_bound,
    ot_distance,
    oracle_equivalence,
]


def run_all(cfg: SuiteConfig | None = None) -> list[SuiteResult]:
    cfg = cfg or SuiteConfig.from_env()
    return [suite(cfg) for suite in CRITERIA]
