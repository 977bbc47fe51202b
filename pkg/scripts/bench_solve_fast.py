"""Time solve_fast on random PIC triples of growing size."""

import argparse
import random
import statistics
import time
from dataclasses import dataclass

from ptegkit.generators import TripleConfig, random_triple
from ptegkit.ncp import solve_fast


@dataclass
class BenchConfig:
    sizes: tuple = (10, 25, 50, 100)
    repeats: int = 5
    density: float = 0.3
    seed: int = 0


def run(cfg: BenchConfig) -> None:
    rng = random.Random(cfg.seed)
    print(f"{'n':>5} {'median s':>10} {'max s':>8}  results")
    for n in cfg.sizes:
        times, results = [], []
        for _ in range(cfg.repeats):
            t = random_triple(rng, TripleConfig(n_min=n, n_max=n, density=cfg.density))
            start = time.perf_counter()
            s = solve_fast(t)
            times.append(time.perf_counter() - start)
            results.append(str(s))
        print(f"{n:>5} {statistics.median(times):>10.3f} {max(times):>8.3f}  {', '.join(results)}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 25, 50, 100])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    run(BenchConfig(tuple(a.sizes), a.repeats, a.density, a.seed))


if __name__ == "__main__":
    main()
