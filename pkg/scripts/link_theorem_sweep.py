"""Run the link-theorem construction on random (base, edge) pairs.

Reports the path-length histogram split by the sign of the added
component, and the families of the neighbour vertices.

    python3 scripts/link_theorem_sweep.py --n 500 --seed 1
"""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from contact_surgery.explorer import verify_link_theorem
from contact_surgery.generators import DiagramBounds, link_theorem_instance


@dataclass
class SweepConfig:
    n: int = 500
    seed: int = 1
    n_max: int = 4


def main(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    lengths = Counter()
    families = Counter()
    for _ in range(cfg.n):
        base, comp, lk = link_theorem_instance(rng, DiagramBounds(n_max=cfg.n_max))
        path = verify_link_theorem(base, comp, lk)
        path.check()
        lengths[(comp.sign, len(path))] += 1
        families[path.start_key.family.value] += 1
    print("sign  length  count")
    for (sign, length), n in sorted(lengths.items()):
        print(f"{sign:+4d}  {length:6d}  {n:5d}")
    print("neighbour families:", dict(sorted(families.items())))
    print(f"max length {max(l for _, l in lengths)} over {cfg.n} instances")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--n-max", type=int, default=4)
    a = ap.parse_args()
    main(SweepConfig(a.n, a.seed, a.n_max))
