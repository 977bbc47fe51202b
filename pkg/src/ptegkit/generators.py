"""Seeded random instances for property tests and experiment scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .maxplus import BOTTOM, TOP, MpMatrix
from .ncp import PicTriple
from .pteg import EventGraphSpec, Place, Pteg


@dataclass(frozen=True)
class RationalConfig:
    max_den: int = 4
    lo: int = -10
    hi: int = 10


def random_rational(rng: random.Random, cfg: RationalConfig = RationalConfig()) -> Fraction:
    den = rng.randint(1, cfg.max_den)
    return Fraction(rng.randint(cfg.lo * den, cfg.hi * den), den)


def random_matrix(rng: random.Random, rows: int, cols: int, density: float = 0.5,
                  cfg: RationalConfig = RationalConfig()) -> MpMatrix:
    return MpMatrix([[random_rational(rng, cfg) if rng.random() < density else BOTTOM
                      for _ in range(cols)] for _ in range(rows)])


@dataclass(frozen=True)
class TripleConfig:
    n_min: int = 1
    n_max: int = 8
    density: float = 0.3
    values: RationalConfig = RationalConfig()
    # probability of clipping entries so that a random period is feasible
    planted_prob: float = 0.5


def random_triple(rng: random.Random, cfg: TripleConfig = TripleConfig()) -> PicTriple:
    n = rng.randint(cfg.n_min, cfg.n_max)
    P, I, C = (random_matrix(rng, n, n, cfg.density, cfg.values) for _ in range(3))
    if rng.random() < cfg.planted_prob:
        P, I, C = _plant(rng, P, I, C, cfg.values)
    return PicTriple(P, I, C)


def _plant(rng, P, I, C, values: RationalConfig):
    """Lower entries until ``lam0`` is feasible with potential ``x``.

    Each arc ``j -> i`` then satisfies ``w(lam0) <= x_i - x_j``, so every
    circuit weighs at most zero there.
    """
    n = P.rows
    x = [random_rational(rng, values) for _ in range(n)]
    lam0 = random_rational(rng, values)
    out = []
    for M, slope in ((P, 1), (I, -1), (C, 0)):
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                a = M[i, j]
                if a is not BOTTOM:
                    a = min(a, x[i] - x[j] - slope * lam0)
                row.append(a)
            rows.append(row)
        out.append(MpMatrix(rows))
    return out


@dataclass(frozen=True)
class PtegConfig:
    n_min: int = 1
    n_max: int = 4
    place_prob: float = 0.35
    max_den: int = 4
    max_bound: int = 8
    unbounded_prob: float = 0.3
    # probability of widening intervals around a random 1-periodic schedule
    planted_prob: float = 0.5


def _interval(rng: random.Random, cfg) -> tuple:
    den = rng.randint(1, cfg.max_den)
    lo = Fraction(rng.randint(0, cfg.max_bound * den), den)
    if rng.random() < cfg.unbounded_prob:
        return lo, TOP
    den = rng.randint(1, cfg.max_den)
    return lo, lo + Fraction(rng.randint(0, cfg.max_bound * den), den)


def random_pteg(rng: random.Random, cfg: PtegConfig = PtegConfig()) -> Pteg:
    """A P-TEG with markings in {0, 1} built straight from its bound matrices."""
    n = rng.randint(cfg.n_min, cfg.n_max)
    A = [[[BOTTOM] * n for _ in range(n)] for _ in range(2)]
    B = [[[TOP] * n for _ in range(n)] for _ in range(2)]
    planted = rng.random() < cfg.planted_prob
    if planted:
        frac = RationalConfig(max_den=cfg.max_den, lo=0, hi=cfg.max_bound)
        x = [random_rational(rng, frac) for _ in range(n)]
        lam0 = random_rational(rng, frac)
    for mu in (0, 1):
        for i in range(n):
            for j in range(n):
                if rng.random() >= cfg.place_prob:
                    continue
                lo, hi = _interval(rng, cfg)
                if planted:
                    # holding time of x(k) = x + k*lam0 on this place
                    delay = x[i] - x[j] + mu * lam0
                    if delay < 0:
                        continue
                    lo, hi = min(lo, delay), max(hi, delay)
                A[mu][i][j], B[mu][i][j] = lo, hi
    return Pteg(MpMatrix(A[0]), MpMatrix(A[1]), MpMatrix(B[0]), MpMatrix(B[1]))


@dataclass(frozen=True)
class SpecConfig:
    n_min: int = 1
    n_max: int = 4
    places_min: int = 1
    places_max: int = 6
    max_marking: int = 3
    max_den: int = 4
    max_bound: int = 8
    unbounded_prob: float = 0.3


def random_spec(rng: random.Random, cfg: SpecConfig = SpecConfig()) -> EventGraphSpec:
    n = rng.randint(cfg.n_min, cfg.n_max)
    names = tuple(f"t{i + 1}" for i in range(n))
    places = []
    for _ in range(rng.randint(cfg.places_min, cfg.places_max)):
        lo, hi = _interval(rng, cfg)
        places.append(Place(rng.choice(names), rng.choice(names), rng.randint(0, cfg.max_marking), lo, hi))
    # parallel places with disjoint intervals are rejected by validation; keep one
    seen, kept = {}, []
    for p in places:
        key = (p.source, p.target, p.marking)
        lo, hi = seen.get(key, (p.lower, p.upper))
        lo, hi = max(lo, p.lower), min(hi, p.upper)
        if lo > hi:
            continue
        seen[key] = (lo, hi)
        kept.append(p)
    return EventGraphSpec(names, tuple(kept))
