"""Search two-component unknot diagrams of S^3 with a given d3.

Prints the best candidates in search order and whether the first one
matches the stored diagram.

    python3 scripts/search_sphere_diagrams.py --target -1 --top 5
"""

import argparse
from dataclasses import dataclass

from contact_surgery.explorer import classify
from contact_surgery.invariants import format_rational
from contact_surgery.standard import SPHERE_SUMMANDS, search_sphere_diagrams


@dataclass
class SearchConfig:
    target: int = -1
    tb_min: int = -6
    lk_max: int = 3
    top: int = 5


def describe(d):
    comps = ", ".join(f"{c.id}(tb={c.tb}, rot={c.rot}, {c.sign:+d})" for c in d.components)
    return f"{comps}; lk = {d.lk(*d.ids)}"


def main(cfg: SearchConfig):
    found = search_sphere_diagrams(
        cfg.target, range(cfg.tb_min, 0), range(-cfg.lk_max, cfg.lk_max + 1)
    )
    print(f"d3 = {cfg.target}: {len(found)} diagrams")
    for d in found[: cfg.top]:
        print(f"  {describe(d)}  [{classify(d).label}]")
    stored = SPHERE_SUMMANDS.get(cfg.target)
    if stored is not None and len(stored) == 2:
        print(f"stored diagram is the first hit: {bool(found) and found[0] == stored}")
        print(f"stored d3 = {format_rational(classify(stored).d3)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--target", type=int, default=-1)
    ap.add_argument("--tb-min", type=int, default=-6)
    ap.add_argument("--lk-max", type=int, default=3)
    ap.add_argument("--top", type=int, default=5)
    a = ap.parse_args()
    main(SearchConfig(a.target, a.tb_min, a.lk_max, a.top))
