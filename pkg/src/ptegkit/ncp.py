"""Proportional-inverse-constant non-positive circuit weight problem.

Given ``P, I, C`` the task is the set of real ``lam`` for which the precedence
graph of ``lam P ⊕ lam^-1 I ⊕ C`` has no circuit of positive weight. That set
is always empty or a closed interval, since every circuit weight is a convex
piecewise-linear function of ``lam``.

Two solvers are provided and must agree: :func:`solve_exact` intersects the
sublevel sets of all elementary circuits, :func:`solve_fast` only asks
Bellman-Ford feasibility questions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .maxplus import (BOTTOM, TOP, ExtScalar, MpMatrix, PositiveCircuitError, is_finite,
                      kleene_star, m_otimes)
from .precgraph import (_check_square_triple, circuit_pwl, enumerate_simple_circuits,
                        find_positive_cycle, param_graph)

log = logging.getLogger(__name__)


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class PicTriple:
    P: MpMatrix
    I: MpMatrix
    C: MpMatrix

    def __post_init__(self):
        _check_square_triple(self.P, self.I, self.C)

    @property
    def n(self) -> int:
        return self.P.rows

    def entries(self):
        for M in (self.P, self.I, self.C):
            yield from (x for x in M.flat() if is_finite(x))


@dataclass(frozen=True)
class FeasibleSet:
    """Empty, or the closed interval ``[lo, hi]`` (ends may be infinite)."""

    lo: ExtScalar | None
    hi: ExtScalar | None

    def __post_init__(self):
        if (self.lo is None) != (self.hi is None):
            raise ValueError("half-empty feasible set")
        if self.lo is not None:
            if self.lo is TOP or self.hi is BOTTOM or self.lo > self.hi:
                raise ValueError(f"crossed interval [{self.lo}, {self.hi}]; use FeasibleSet.empty()")

    @classmethod
    def empty(cls) -> "FeasibleSet":
        return cls(None, None)

    @classmethod
    def interval(cls, lo=BOTTOM, hi=TOP) -> "FeasibleSet":
        return cls(lo if lo in (BOTTOM, TOP) else Fraction(lo),
                   hi if hi in (BOTTOM, TOP) else Fraction(hi))

    @classmethod
    def everything(cls) -> "FeasibleSet":
        return cls(BOTTOM, TOP)

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    def __contains__(self, lam) -> bool:
        return not self.is_empty and self.lo <= lam <= self.hi

    def intersect(self, other: "FeasibleSet") -> "FeasibleSet":
        if self.is_empty or other.is_empty:
            return FeasibleSet.empty()
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo is TOP or hi is BOTTOM or lo > hi:
            return FeasibleSet.empty()
        return FeasibleSet(lo, hi)

    def scaled(self, factor: Fraction) -> "FeasibleSet":
        """Image under ``lam -> factor * lam`` for positive ``factor``."""
        if self.is_empty:
            return self
        f = Fraction(factor)
        if f <= 0:
            raise ValueError("scale factor must be positive")
        lo = self.lo if not is_finite(self.lo) else self.lo * f
        hi = self.hi if not is_finite(self.hi) else self.hi * f
        return FeasibleSet(lo, hi)

    def __str__(self):
        if self.is_empty:
            return "empty"
        left = "(-inf" if self.lo is BOTTOM else f"[{self.lo}"
        right = "inf)" if self.hi is TOP else f"{self.hi}]"
        return f"{left}, {right}"


class _ScaledTriple:
    """Integer view of a triple: every entry multiplied by the common denominator."""

    def __init__(self, t: PicTriple):
        self.n = t.n
        self.D = lcm(1, *(x.denominator for x in t.entries()))
        D = self.D
        arcs = []
        for j in range(self.n):
            for i in range(self.n):
                p, q, c = t.P[i, j], t.I[i, j], t.C[i, j]
                terms = tuple(int(x * D) if is_finite(x) else None for x in (p, q, c))
                if terms != (None, None, None):
                    arcs.append((j, i) + terms)
        self.arcs = arcs

    def witness(self, lam) -> tuple | None:
        lam = Fraction(lam)
        a, b = lam.numerator, lam.denominator
        shift = a * self.D
        weighted = []
        for j, i, p, q, c in self.arcs:
            w = None
            if p is not None:
                w = p * b + shift
            if q is not None:
                v = q * b - shift
                if w is None or v > w:
                    w = v
            if c is not None:
                v = c * b
                if w is None or v > w:
                    w = v
            weighted.append((j, i, w))
        return find_positive_cycle(self.n, weighted)


def feasible_at(t: PicTriple, lam) -> bool:
    return _ScaledTriple(t).witness(lam) is None


def positive_circuit_at(t: PicTriple, lam):
    """A positive circuit of the graph at ``lam``, or ``None``."""
    return _ScaledTriple(t).witness(lam)


def solve_exact(t: PicTriple, max_nodes: int = 12) -> FeasibleSet:
    """Intersect the non-positivity intervals of every elementary circuit."""
    if t.n > max_nodes:
        raise InstanceTooLarge(f"{t.n} nodes exceeds the enumeration cap of {max_nodes}")
    result = FeasibleSet.everything()
    for circ in enumerate_simple_circuits(param_graph(t.P, t.I, t.C)):
        ends = circuit_pwl(circ, t.P, t.I, t.C).nonpositive_set()
        result = result.intersect(FeasibleSet.empty() if ends is None else FeasibleSet(*ends))
        if result.is_empty:
            break
    return result


def endpoint_bound(t: PicTriple) -> Fraction:
    """Every finite endpoint lies strictly inside ``[-B, B]``."""
    m = max((abs(x) for x in t.entries()), default=Fraction(0))
    return 1 + t.n * m


class _Search:
    """State of one fast solve: probe cache, circuit cuts, and the bracket."""

    def __init__(self, t: PicTriple):
        self.t = t
        self.scaled = _ScaledTriple(t)
        self.bound = endpoint_bound(t)
        self.max_den = max(1, t.n * self.scaled.D)
        self.tol = Fraction(1, 2 * self.max_den ** 2)
        self.lo, self.hi = -self.bound, self.bound
        self._cache: dict[Fraction, tuple | None] = {}
        self.probes = 0

    def witness(self, lam: Fraction):
        if lam not in self._cache:
            self.probes += 1
            self._cache[lam] = self.scaled.witness(lam)
        return self._cache[lam]

    def cut(self, circ) -> bool:
        """Shrink the bracket to the witness circuit's feasible interval.

        Returns False when that interval is empty.
        """
        ends = circuit_pwl(circ, self.t.P, self.t.I, self.t.C).nonpositive_set()
        if ends is None:
            return False
        a, b = ends
        if a is not BOTTOM and a > self.lo:
            self.lo = a
        if b is not TOP and b < self.hi:
            self.hi = b
        return True

    def test(self, lam: Fraction) -> bool | None:
        """True if feasible; otherwise cut, and None if the cut proves emptiness."""
        w = self.witness(lam)
        if w is None:
            return True
        return False if self.cut(w) else None

    def snap(self, a: Fraction, b: Fraction) -> Fraction:
        return ((a + b) / 2).limit_denominator(self.max_den)


def _find_feasible(s: _Search) -> Fraction | None:
    for start in (s.hi, s.lo):
        r = s.test(start)
        if r is None:
            return None
        if r:
            return start
    while s.lo <= s.hi:
        if s.hi - s.lo < s.tol:
            x = s.snap(s.lo, s.hi)
            return x if s.lo <= x <= s.hi and s.witness(x) is None else None
        for x in (s.lo, s.hi, (s.lo + s.hi) / 2):
            if not s.lo <= x <= s.hi:
                break
            r = s.test(x)
            if r is None:
                return None
            if r:
                return x
    return None


def _find_lower(s: _Search, good: Fraction) -> ExtScalar:
    """Smallest feasible point, given feasible ``good`` and ``s.lo <= endpoint``."""
    if s.lo == -s.bound and s.witness(s.lo) is None:
        return BOTTOM
    while True:
        if good - s.lo < s.tol:
            x = s.snap(s.lo, good)
            if not (s.lo <= x <= good and s.witness(x) is None):
                raise ArithmeticError(f"snapped lower endpoint {x} failed verification")
            return x
        if s.test(s.lo):
            return s.lo
        mid = (s.lo + good) / 2
        if mid > s.lo and s.test(mid):
            good = mid


def _find_upper(s: _Search, good: Fraction) -> ExtScalar:
    if s.hi == s.bound and s.witness(s.hi) is None:
        return TOP
    while True:
        if s.hi - good < s.tol:
            x = s.snap(good, s.hi)
            if not (good <= x <= s.hi and s.witness(x) is None):
                raise ArithmeticError(f"snapped upper endpoint {x} failed verification")
            return x
        if s.test(s.hi):
            return s.hi
        mid = (good + s.hi) / 2
        if mid < s.hi and s.test(mid):
            good = mid


def solve_fast(t: PicTriple) -> FeasibleSet:
    """Feasible set from feasibility probes alone.

    Infeasible probes return a positive circuit whose own feasible interval
    contains the answer, so the bracket is cut to it; bisection guarantees
    progress and a final continued-fraction snap recovers endpoints whose
    denominator is at most ``n * D``.
    """
    s = _Search(t)
    good = _find_feasible(s)
    if good is None:
        log.debug("empty after %d probes", s.probes)
        return FeasibleSet.empty()
    lo = _find_lower(s, good)
    hi = _find_upper(s, good)
    for x in (lo, hi):
        if is_finite(x) and x.denominator > s.max_den:
            raise ArithmeticError(f"endpoint {x} exceeds denominator bound {s.max_den}")
    if is_finite(lo) and is_finite(hi) and s.witness((lo + hi) / 2) is not None:
        raise ArithmeticError("interior point of the computed interval is infeasible")
    log.debug("solved in %d probes", s.probes)
    return FeasibleSet(lo, hi)


class SolutionMap:
    """All finite solutions of ``A ⊗ x <= x``: ``x = A* ⊗ u`` for finite ``u``."""

    def __init__(self, A: MpMatrix):
        self.A = A
        self.star = kleene_star(A)

    def __call__(self, u: Sequence) -> tuple:
        if len(u) != self.A.rows:
            raise ValueError(f"expected {self.A.rows} values, got {len(u)}")
        return m_otimes(self.star, MpMatrix.column(u)).vector()


def solution_vectors(A: MpMatrix) -> SolutionMap:
    return SolutionMap(A)


__all__ = ["PicTriple", "FeasibleSet", "InstanceTooLarge", "PositiveCircuitError",
           "feasible_at", "positive_circuit_at", "solve_exact", "solve_fast",
           "endpoint_bound", "solution_vectors", "SolutionMap"]
