"""P-time event graphs: model, normalization, periodic analysis and trajectories.

A place ``t_j -> t_i`` with ``m`` initial tokens and sojourn interval
``[lower, upper]`` constrains the dater by
``lower <= x_i(k + m) - x_j(k) <= upper``. After normalization every marking
is 0 or 1 and the model is carried by four matrices ``A0, A1`` (lower bounds,
epsilon where no place) and ``B0, B1`` (upper bounds, TOP where no place).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import networkx as nx

from .maxplus import (BOTTOM, TOP, ExtScalar, MpMatrix, is_finite, kleene_star, m_conjugate,
                      m_oplus, m_otimes, scalar, tensor)
from .ncp import FeasibleSet, PicTriple, solve_fast

INF = TOP


# -- model -------------------------------------------------------------------

@dataclass(frozen=True)
class Place:
    source: str
    target: str
    marking: int = 0
    lower: Fraction = Fraction(0)
    upper: ExtScalar = TOP

    @classmethod
    def make(cls, source, target, marking=0, lower=0, upper="inf") -> "Place":
        return cls(source, target, int(marking), scalar(lower), scalar(upper))


@dataclass(frozen=True)
class EventGraphSpec:
    transitions: tuple
    places: tuple = ()

    def index(self, name: str) -> int:
        return self.transitions.index(name)


class SpecError(ValueError):
    """Structural or interval violations; ``diagnostics`` lists (place, message)."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(f"place {k}: {msg}" if k is not None else msg for k, msg in self.diagnostics)
        super().__init__(lines)


def validate_spec(spec: EventGraphSpec) -> EventGraphSpec:
    diag = []
    names = list(spec.transitions)
    if len(set(names)) != len(names):
        diag.append((None, "duplicate transition names"))
    known = set(names)
    merged: dict[tuple, tuple] = {}
    for k, p in enumerate(spec.places):
        for end in (p.source, p.target):
            if end not in known:
                diag.append((k, f"unknown transition {end!r}"))
        if isinstance(p.marking, bool) or not isinstance(p.marking, int) or p.marking < 0:
            diag.append((k, f"marking must be a nonnegative integer, got {p.marking!r}"))
        if not is_finite(p.lower) or p.lower < 0:
            diag.append((k, f"lower bound must be a finite nonnegative rational, got {p.lower}"))
            continue
        if p.upper is BOTTOM or (is_finite(p.upper) and p.upper < 0):
            diag.append((k, f"upper bound must be nonnegative or inf, got {p.upper}"))
            continue
        if p.lower > p.upper:
            diag.append((k, f"invalid interval [{p.lower}, {p.upper}]"))
            continue
        key = (p.source, p.target, p.marking)
        lo, hi = merged.get(key, (Fraction(0), TOP))
        lo, hi = max(lo, p.lower), min(hi, p.upper)
        if lo > hi:
            diag.append((k, f"parallel places {p.source}->{p.target} (m={p.marking}) have disjoint intervals"))
        merged[key] = (lo, hi)
    if diag:
        raise SpecError(diag)
    return spec


def normalized_spec(spec: EventGraphSpec) -> tuple[EventGraphSpec, dict]:
    """Rewrite every place with ``m >= 2`` as a chain of ``m`` marked places.

    The chain runs through ``m - 1`` fresh transitions appended after the
    originals. The original interval sits on the place entering the original
    downstream transition; the other chain places get ``[0, 0]`` so the fresh
    transitions fire as soon as a token reaches them.
    """
    validate_spec(spec)
    transitions = list(spec.transitions)
    places = []
    for k, p in enumerate(spec.places):
        if p.marking <= 1:
            places.append(p)
            continue
        prev = p.source
        for step in range(1, p.marking):
            fresh = _fresh_name(transitions, f"{p.source}_{p.target}_p{k}_{step}")
            transitions.append(fresh)
            places.append(Place(prev, fresh, 1, Fraction(0), Fraction(0)))
            prev = fresh
        places.append(Place(prev, p.target, 1, p.lower, p.upper))
    mapping = {i: i for i in range(len(spec.transitions))}
    return EventGraphSpec(tuple(transitions), tuple(places)), mapping


def _fresh_name(taken: list, base: str) -> str:
    name, k = base, 1
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    return name


def normalized_count(spec: EventGraphSpec) -> int:
    return len(spec.transitions) + sum(max(0, p.marking - 1) for p in spec.places)


@dataclass(frozen=True)
class Pteg:
    """A P-TEG with markings in {0, 1}, given by its four bound matrices."""

    A0: MpMatrix
    A1: MpMatrix
    B0: MpMatrix
    B1: MpMatrix
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        n = self.A0.rows
        for M in (self.A0, self.A1, self.B0, self.B1):
            if M.shape != (n, n):
                raise ValueError("bound matrices must all be n x n")
        for A, B in ((self.A0, self.B0), (self.A1, self.B1)):
            for a, b in zip(A.flat(), B.flat()):
                if a is TOP or b is BOTTOM:
                    raise ValueError("lower bounds must avoid TOP and upper bounds epsilon")
                if a is BOTTOM and b is not TOP:
                    raise ValueError("an upper bound without a place")
                if a is not BOTTOM and (a < 0 or a > b):
                    raise ValueError(f"invalid interval [{a}, {b}]")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"t{i + 1}" for i in range(n)))

    @property
    def n(self) -> int:
        return self.A0.rows

    @classmethod
    def empty(cls, n: int) -> "Pteg":
        lo, hi = MpMatrix.filled(n, n, BOTTOM), MpMatrix.filled(n, n, TOP)
        return cls(lo, lo, hi, hi)

    @classmethod
    def from_spec(cls, spec: EventGraphSpec) -> "Pteg":
        validate_spec(spec)
        n = len(spec.transitions)
        A = [[[BOTTOM] * n for _ in range(n)] for _ in range(2)]
        B = [[[TOP] * n for _ in range(n)] for _ in range(2)]
        for p in spec.places:
            if p.marking > 1:
                raise ValueError("normalize the spec first: marking > 1")
            i, j = spec.index(p.target), spec.index(p.source)
            mu = p.marking
            A[mu][i][j] = p.lower if A[mu][i][j] is BOTTOM else max(A[mu][i][j], p.lower)
            B[mu][i][j] = min(B[mu][i][j], p.upper)
        return cls(MpMatrix(A[0]), MpMatrix(A[1]), MpMatrix(B[0]), MpMatrix(B[1]),
                   names=tuple(spec.transitions))


def normalize(spec: EventGraphSpec) -> tuple[Pteg, dict]:
    flat, mapping = normalized_spec(spec)
    return Pteg.from_spec(flat), mapping


def dynamics_matrices(p: Pteg) -> tuple[MpMatrix, MpMatrix, MpMatrix, MpMatrix]:
    return p.A0, p.A1, p.B0, p.B1


# -- reduction to the parametric circuit problem -----------------------------

def pic_reduction(p: Pteg) -> PicTriple:
    P = m_conjugate(p.B1)
    I = m_oplus(p.A1, MpMatrix.identity(p.n))
    C = m_oplus(p.A0, m_conjugate(p.B0))
    return PicTriple(P, I, C)


def _band(d: int, offset: int) -> MpMatrix:
    return MpMatrix._raw(tuple(tuple(Fraction(0) if j - i == offset else BOTTOM for j in range(d))
                               for i in range(d)))


def _unit(d: int, i: int, j: int) -> MpMatrix:
    return MpMatrix._raw(tuple(tuple(Fraction(0) if (r, c) == (i, j) else BOTTOM for c in range(d))
                               for r in range(d)))


def tensor_blocks(d: int, lam) -> tuple[MpMatrix, MpMatrix, MpMatrix]:
    if d < 1:
        raise ValueError("d must be a positive integer")
    lam = Fraction(lam)
    TP = [list(r) for r in _band(d, 1)]
    TI = [list(r) for r in _band(d, -1)]
    TP[d - 1][0] = d * lam
    TI[0][d - 1] = -d * lam
    return MpMatrix(TP), MpMatrix(TI), MpMatrix.identity(d)


def tensor_system(p: Pteg, d: int, lam) -> MpMatrix:
    t = pic_reduction(p)
    TP, TI, TC = tensor_blocks(d, lam)
    return m_oplus(m_oplus(tensor(TP, t.P), tensor(TI, t.I)), tensor(TC, t.C))


def tensor_pic(p: Pteg, d: int) -> PicTriple:
    """The ``dn x dn`` triple whose parameter is ``mu = d * lam``."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    t = pic_reduction(p)
    P = tensor(_unit(d, d - 1, 0), t.P)
    I = tensor(_unit(d, 0, d - 1), t.I)
    C = m_oplus(m_oplus(tensor(_band(d, 1), t.P), tensor(_band(d, -1), t.I)),
                tensor(MpMatrix.identity(d), t.C))
    return PicTriple(P, I, C)


NONNEGATIVE = FeasibleSet(Fraction(0), TOP)


def period_set(p: Pteg, d: int = 1, mode: str = "theorem2",
               solver: Callable[[PicTriple], FeasibleSet] = solve_fast) -> FeasibleSet:
    """Periods of the consistent ``d``-periodic trajectories.

    ``theorem2`` solves the ``n x n`` problem (the answer does not depend on
    ``d``); ``tensor`` solves the ``dn x dn`` problem in ``mu = d lam``.
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    if mode == "theorem2":
        res = solver(pic_reduction(p))
    elif mode == "tensor":
        res = solver(tensor_pic(p, d)).scaled(Fraction(1, d))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return res.intersect(NONNEGATIVE)


def bounded_consistency(p: Pteg) -> bool:
    return not period_set(p, 1).is_empty


# -- trajectories ------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    """``x(k + d) = d * lam + x(k)`` generated from ``seed = (x(0), ..., x(d-1))``."""

    d: int
    lam: Fraction
    seed: tuple

    def __post_init__(self):
        if self.d < 1 or len(self.seed) != self.d:
            raise ValueError("need exactly d >= 1 seed vectors")
        if self.lam < 0:
            raise ValueError("period must be nonnegative")
        if any(not is_finite(v) for x in self.seed for v in x):
            raise ValueError("seed vectors must be finite")

    def x(self, k: int) -> tuple:
        q, r = divmod(k, self.d)
        shift = q * self.d * self.lam
        return tuple(v + shift for v in self.seed[r])

    def upto(self, K: int) -> list[tuple]:
        return [self.x(k) for k in range(K + 1)]


class NonFiniteSolution(ArithmeticError):
    pass


def synthesize(p: Pteg, d: int, lam, u: Sequence | None = None) -> Trajectory:
    """Consistent ``d``-periodic trajectory from ``star(tensor system) ⊗ u``.

    Raises :class:`~ptegkit.maxplus.PositiveCircuitError` when ``lam`` is not
    an admissible period.
    """
    lam = Fraction(lam)
    n = p.n
    star = kleene_star(tensor_system(p, d, lam))
    u = [Fraction(0)] * (d * n) if u is None else [scalar(v) for v in u]
    if len(u) != d * n:
        raise ValueError(f"u must have {d * n} entries")
    x = m_otimes(star, MpMatrix.column(u)).vector()
    if any(not is_finite(v) for v in x):
        raise NonFiniteSolution("solution has infinite entries")
    seed = tuple(tuple(x[k * n:(k + 1) * n]) for k in range(d))
    return Trajectory(d, lam, seed)


@dataclass(frozen=True)
class Violation:
    k: int
    constraint: str  # A0, B0, A1, B1 or monotone
    i: int
    j: int

    def __str__(self):
        return f"k={self.k} {self.constraint} ({self.i + 1},{self.j + 1})"


@dataclass(frozen=True)
class ValidationReport:
    horizon: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_trajectory(p: Pteg, t: Trajectory, horizon: int | None = None) -> ValidationReport:
    K = 3 * t.d if horizon is None else horizon
    out = []
    n = p.n
    for k in range(K + 1):
        x, y = t.x(k), t.x(k + 1)
        for i in range(n):
            if y[i] < x[i]:
                out.append(Violation(k, "monotone", i, i))
            for j in range(n):
                a0, b0, a1, b1 = p.A0[i, j], p.B0[i, j], p.A1[i, j], p.B1[i, j]
                if a0 is not BOTTOM and x[i] < a0 + x[j]:
                    out.append(Violation(k, "A0", i, j))
                if b0 is not TOP and x[i] > b0 + x[j]:
                    out.append(Violation(k, "B0", i, j))
                if a1 is not BOTTOM and y[i] < a1 + x[j]:
                    out.append(Violation(k, "A1", i, j))
                if b1 is not TOP and y[i] > b1 + x[j]:
                    out.append(Violation(k, "B1", i, j))
    return ValidationReport(K, tuple(out))


# -- independent oracle --------------------------------------------------------

def oracle_1periodic(spec: EventGraphSpec, lam) -> bool:
    """Direct difference-constraint check on the raw spec, any markings.

    A 1-periodic trajectory with period ``lam`` exists iff ``lam >= 0`` and
    ``lower <= x_i + m lam - x_j <= upper`` is solvable for every place.
    """
    validate_spec(spec)
    lam = Fraction(lam)
    if lam < 0:
        return False
    G = nx.DiGraph()
    G.add_nodes_from(spec.transitions)

    def constrain(u, v, w):  # x_v - x_u <= w
        if G.has_edge(u, v):
            w = min(w, G[u][v]["weight"])
        G.add_edge(u, v, weight=w)

    for p in spec.places:
        if p.upper is not TOP:
            constrain(p.source, p.target, p.upper - p.marking * lam)
        constrain(p.target, p.source, p.marking * lam - p.lower)
    for v in list(G.nodes):
        if G.has_edge(v, v) and G[v][v]["weight"] < 0:
            return False
    return not nx.negative_edge_cycle(G)
