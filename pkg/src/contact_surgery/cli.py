"""Command-line entry point: ``contact-surgery <verb> ...``.

Exit codes: 0 success, 2 parse or validation error, 3 precondition error,
4 invariance failure, 5 budget exceeded (partial output still written),
1 failed verification suite.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import yaml

from .diagram import (
    DiagramError,
    DiagramParseError,
    SurgeryComponent,
    SurgeryDiagram,
    parse_diagram,
    validate,
)
from .explorer import (
    CertificateError,
    PathCertificate,
    build_subgraph,
    classify,
    darboux_generators,
    ot_ladder,
    read_path_bundle,
    verify_detour,
    verify_link_theorem,
    verify_ot_distance_bound,
    write_bundle,
)
from .invariants import PreconditionError, characteristic_sublinks, report
from .moves import InvarianceError, MoveError, run_script
from .suites import SuiteConfig, run_all

EXIT_PARSE, EXIT_PRECONDITION, EXIT_INVARIANCE, EXIT_BUDGET, EXIT_SUITE = 2, 3, 4, 5, 1


def read_diagram(path: str) -> SurgeryDiagram:
    with open(path) as fh:
        return parse_diagram(fh.read(), path)


def parse_script(text: str, source: str = "<string>") -> list[dict]:
    """A move script: a YAML list of ``{kind, params}`` records."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise DiagramParseError(f"{where}: {getattr(exc, 'problem', exc)}") from exc
    if data is None:
        return []
    if not isinstance(data, list):
        raise DiagramParseError(f"{source}: a move script is a list of {{kind, params}} records")
    out = []
    for k, rec in enumerate(data):
        if not isinstance(rec, dict) or "kind" not in rec or set(rec) - {"kind", "params"}:
            raise DiagramParseError(f"{source}: step {k}: expected fields kind, params")
        params = rec.get("params") or {}
        if not isinstance(params, dict):
            raise DiagramParseError(f"{source}: step {k}: params must be a mapping")
        out.append({"kind": str(rec["kind"]), "params": params})
    return out


def parse_component(spec: str) -> SurgeryComponent:
    """``id,tb,rot,sign`` as in ``N,-2,1,+1``."""
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) != 4:
        raise DiagramParseError(f"component {spec!r}: expected id,tb,rot,sign")
    try:
        return SurgeryComponent(parts[0], int(parts[1]), int(parts[2]), int(parts[3]))
    except ValueError:
        raise DiagramParseError(f"component {spec!r}: tb, rot and sign must be integers") from None


def parse_linking(items: Sequence[str]) -> dict[str, int]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise DiagramParseError(f"linking {item!r}: expected id=n")
        try:
            out[key.strip()] = int(value)
        except ValueError:
            raise DiagramParseError(f"linking {item!r}: {value!r} is not an integer") from None
    return out


def _emit(args, table: list[tuple[str, str]], data: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2, sort_keys=True))
        return
    width = max((len(k) for k, _ in table), default=0)
    for k, v in table:
        print(f"{k.ljust(width)}  {v}")


def _path_table(path: PathCertificate) -> list[tuple[str, str]]:
    rows = [("length", str(len(path))), ("start", path.start_key.label)]
    for k, e in enumerate(path.edges):
        rewrite = f" then {', '.join(r.kind for r in e.rewrite)}" if e.rewrite else ""
        rows.append((f"edge {k}", f"{e.describe()}{rewrite} -> {e.to_key.label}"))
    rows.append(("end", path.end_key.label))
    return rows


def _finish_path(args, path: PathCertificate) -> int:
    path.check()
    if args.out:
        write_bundle(args.out, path=path)
    _emit(args, _path_table(path), path.to_data())
    return 0


# --- verbs ------------------------------------------------------------------


def cmd_validate(args) -> int:
    d = read_diagram(args.diagram)
    problems = validate(d)
    for p in problems:
        print(f"{args.diagram}: {p}")
    if not problems:
        print(f"{args.diagram}: ok ({len(d)} components)")
    return EXIT_PARSE if problems else 0


def cmd_invariants(args) -> int:
    d = read_diagram(args.diagram)
    problems = validate(d)
    if problems:
        raise DiagramError("; ".join(problems))
    r = report(d)
    key = classify(d)
    row = r.row()
    row["characteristic sublinks"] = str(len(characteristic_sublinks(d)))
    row["family"] = key.family.value
    if key.ot_certificate:
        row["overtwisted witness"] = key.ot_certificate.describe()
    _emit(args, list(row.items()), {"diagram_hash": d.content_hash(), **row})
    return 0


def cmd_move(args) -> int:
    d = read_diagram(args.diagram)
    if args.script:
        with open(args.script) as fh:
            script = parse_script(fh.read(), args.script)
    else:
        if not args.kind:
            raise PreconditionError("give --script or --kind")
        params = {}
        for item in args.param or []:
            k, _, v = item.partition("=")
            params[k] = yaml.safe_load(v)
        script = [{"kind": args.kind, "params": params}]
    out, records = run_script(d, script)
    text = out.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    log = yaml.safe_dump([r.to_data() for r in records], sort_keys=True)
    if args.log:
        with open(args.log, "w") as fh:
            fh.write(log)
    else:
        sys.stderr.write(log)
    return 0


def cmd_ladder(args) -> int:
    return _finish_path(args, ot_ladder(args.from_k, args.to_k))


def cmd_link_theorem(args) -> int:
    base = read_diagram(args.base)
    path = verify_link_theorem(base, parse_component(args.component), parse_linking(args.lk or []))
    return _finish_path(args, path)


def cmd_detour(args) -> int:
    path = read_path_bundle(args.path)
    forbidden = {classify(read_diagram(f)) for f in args.forbid or []}
    return _finish_path(args, verify_detour(path, forbidden, args.p))


def cmd_ot_distance(args) -> int:
    return _finish_path(args, verify_ot_distance_bound(read_path_bundle(args.path)))


def cmd_subgraph(args) -> int:
    cfg = SuiteConfig.from_env()
    seeds = [read_diagram(f) for f in args.seed] or [SurgeryDiagram()]
    signs = tuple(int(s) for s in args.signs.split(","))
    gens = darboux_generators(args.t_max or cfg.t_max, args.rot_bound, signs)
    depth = cfg.depth if args.depth is None else args.depth
    g = build_subgraph(seeds, gens, depth, args.max_vertices)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(g.to_dot())
    if args.out:
        write_bundle(args.out, graph=g)
    rows = [
        ("vertices", str(len(g.vertices))),
        ("edges", str(len(g.edges))),
        ("truncated", "yes" if g.truncated else "no"),
    ]
    rows += [(f"depth {g.depth[k]}", k.label) for k in g.sorted_vertices()]
    _emit(args, rows, g.to_data())
    if g.truncated:
        print("budget exceeded: graph truncated", file=sys.stderr)
        return EXIT_BUDGET
    return 0


def cmd_verify_all(args) -> int:
    results = run_all(SuiteConfig.from_env())
    for r in results:
        print(r.line() if args.timing else r.short())
        for f in r.failures:
            print("    " + f.replace("\n", "\n    "))
    return 0 if all(r.passed for r in results) else EXIT_SUITE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contact-surgery", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="machine-readable report")
        return p

    p = verb("validate", cmd_validate, "check a diagram file")
    p.add_argument("diagram")
    p = verb("invariants", cmd_invariants, "homology, d3, Euler class")
    p.add_argument("diagram")
    p = verb("move", cmd_move, "apply a move or a move script")
    p.add_argument("diagram")
    p.add_argument("--script")
    p.add_argument("--kind")
    p.add_argument("--param", action="append", metavar="NAME=VALUE")
    p.add_argument("--out")
    p.add_argument("--log", help="MoveRecord audit log (default: stderr)")
    p = verb("ladder", cmd_ladder, "(+1)-ladder xi_k -> xi_{k+1}")
    p.add_argument("--from", dest="from_k", type=int, required=True)
    p.add_argument("--to", dest="to_k", type=int, required=True)
    p.add_argument("--out", help="certificate bundle directory")
    p = verb("link-theorem", cmd_link_theorem, "path from a neighbour to base # xi_1")
    p.add_argument("base")
    p.add_argument("--component", required=True, metavar="ID,TB,ROT,SIGN")
    p.add_argument("--lk", action="append", metavar="ID=N")
    p.add_argument("--out")
    p = verb("detour", cmd_detour, "reroute a path through an L(p,1) summand")
    p.add_argument("path", help="certificate bundle directory")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--forbid", action="append", metavar="DIAGRAM", help="diagram whose key is forbidden")
    p.add_argument("--out")
    p = verb("ot-distance", cmd_ot_distance, "prefix a path with a split xi_0")
    p.add_argument("path", help="certificate bundle directory")
    p.add_argument("--out")
    p = verb("subgraph", cmd_subgraph, "breadth-first certified subgraph")
    p.add_argument("--seed", action="append", default=[], metavar="DIAGRAM")
    p.add_argument("--depth", type=int)
    p.add_argument("--t-max", type=int)
    p.add_argument("--rot-bound", type=int)
    p.add_argument("--signs", default="1,-1")
    p.add_argument("--max-vertices", type=int, default=10_000)
    p.add_argument("--dot")
    p.add_argument("--out")
    p = verb("verify-all", cmd_verify_all, "run every acceptance suite")
    p.add_argument("--timing", action="store_true")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DiagramParseError, DiagramError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvarianceError as exc:
        print(f"invariance failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANCE
    except CertificateError as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return EXIT_INVARIANCE
    except (MoveError, PreconditionError) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
