"""Reproduce the worked three-transition example end to end.

Prints the period set from every route, the star matrix of the 2-periodic
system and a validated trajectory.
"""

import argparse
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ptegkit.cli import load_model
from ptegkit.maxplus import kleene_star
from ptegkit.ncp import solve_exact, solve_fast
from ptegkit.precgraph import format_number
from ptegkit.pteg import normalize, period_set, pic_reduction, synthesize, tensor_system, validate_trajectory

MODEL = Path(__file__).resolve().parent.parent / "models" / "example.yaml"


@dataclass
class ExampleConfig:
    model: Path = MODEL
    d: int = 2
    lam: Fraction = Fraction(4)
    horizon: int = 10
    max_d: int = 4


def run(cfg: ExampleConfig) -> None:
    spec, _ = load_model(str(cfg.model))
    p, _ = normalize(spec)
    t = pic_reduction(p)
    print(f"solve_exact: {solve_exact(t)}")
    print(f"solve_fast:  {solve_fast(t)}")
    for d in range(1, cfg.max_d + 1):
        print(f"tensor d={d}:  {period_set(p, d, 'tensor')}")

    print(f"\nstar of the d={cfg.d}, lambda={cfg.lam} system:")
    S = kleene_star(tensor_system(p, cfg.d, cfg.lam))
    for i in range(S.rows):
        print("  " + " ".join(f"{format_number(v):>6}" for v in S.row(i)))

    traj = synthesize(p, cfg.d, cfg.lam)
    print("\ntrajectory from u = 0:")
    for k, x in enumerate(traj.upto(cfg.horizon)):
        print(f"  x({k}) = [{', '.join(format_number(v) for v in x)}]")
    report = validate_trajectory(p, traj, cfg.horizon)
    print(f"valid for k = 0..{report.horizon}: {report.ok}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", type=Path, default=MODEL)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--lam", type=Fraction, default=Fraction(4))
    ap.add_argument("--horizon", type=int, default=10)
    a = ap.parse_args()
    run(ExampleConfig(a.model, a.d, a.lam, a.horizon))


if __name__ == "__main__":
    main()
