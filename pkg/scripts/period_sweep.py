"""Compare tensor-mode period sets with the d=1 set on random P-TEGs."""

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass, field

from ptegkit.generators import PtegConfig, random_pteg
from ptegkit.maxplus import TOP
from ptegkit.ncp import solve_exact
from ptegkit.pteg import period_set


@dataclass
class SweepConfig:
    count: int = 200
    seed: int = 0
    ds: tuple = (2, 3, 4)
    pteg: PtegConfig = field(default_factory=PtegConfig)


def kind(s) -> str:
    if s.is_empty:
        return "empty"
    if s.lo == s.hi:
        return "point"
    return "unbounded" if s.hi is TOP else "bounded"


def run(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    kinds, mismatches = Counter(), []
    start = time.perf_counter()
    for k in range(cfg.count):
        p = random_pteg(rng, cfg.pteg)
        base = period_set(p, 1, solver=solve_exact)
        kinds[kind(base)] += 1
        for d in cfg.ds:
            got = period_set(p, d, "tensor")
            if got != base:
                mismatches.append((k, d, str(base), str(got)))
    print(f"{cfg.count} P-TEGs, d in {cfg.ds}, {time.perf_counter() - start:.1f}s")
    print("period set kinds: " + ", ".join(f"{k}={v}" for k, v in sorted(kinds.items())))
    print(f"mismatches: {len(mismatches)}")
    for m in mismatches[:10]:
        print("  instance %d, d=%d: d=1 gives %s, tensor gives %s" % m)
    return len(mismatches)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=4)
    a = ap.parse_args()
    raise SystemExit(1 if run(SweepConfig(a.count, a.seed, pteg=PtegConfig(n_max=a.max_n))) else 0)


if __name__ == "__main__":
    main()
