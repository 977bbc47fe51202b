"""Precedence graphs of max-plus matrices and their circuits.

Nodes are 0-based internally and printed 1-based. An entry ``A[i, j]`` that
is not epsilon gives the arc ``j -> i`` with weight ``A[i, j]``. A circuit is
a tuple of nodes ``(r1, ..., rL)`` closed implicitly by the arc ``rL -> r1``;
the canonical rotation starts at the smallest node.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import networkx as nx

from .maxplus import BOTTOM, TOP, DimensionError, ExtScalar, MpMatrix, is_finite

Circuit = tuple


class TopEntryError(ValueError):
    pass


class NotACircuitError(ValueError):
    pass


class MissingArcError(ValueError):
    pass


@dataclass(frozen=True)
class PrecGraph:
    node_count: int
    arcs: tuple  # (from, to, weight), sorted by (from, to)
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_lookup", {(j, i): w for j, i, w in self.arcs})

    @property
    def n(self) -> int:
        return self.node_count

    def weight(self, j: int, i: int):
        return self._lookup.get((j, i))

    def arc_keys(self):
        return [(j, i) for j, i, _ in self.arcs]


def from_matrix(A: MpMatrix) -> PrecGraph:
    if A.rows != A.cols:
        raise DimensionError("precedence graph of a non-square matrix")
    arcs = []
    for j in range(A.cols):
        for i in range(A.rows):
            a = A[i, j]
            if a is TOP:
                raise TopEntryError(f"entry ({i + 1},{j + 1}) is TOP")
            if a is not BOTTOM:
                arcs.append((j, i, a))
    return PrecGraph(A.rows, tuple(arcs))


def canonical_rotation(nodes: Sequence[int]) -> Circuit:
    k = min(range(len(nodes)), key=nodes.__getitem__)
    return tuple(nodes[k:]) + tuple(nodes[:k])


def _circuit_arcs(rho: Circuit):
    L = len(rho)
    return [(rho[k], rho[(k + 1) % L]) for k in range(L)]


def circuit_weight(g: PrecGraph, rho: Circuit) -> Fraction:
    if len(rho) == 0:
        raise NotACircuitError("empty circuit")
    total = Fraction(0)
    for j, i in _circuit_arcs(rho):
        w = g.weight(j, i)
        if w is None:
            raise NotACircuitError(f"no arc {j + 1} -> {i + 1}")
        total += w
    return total


def circuit_weight_matrix(A: MpMatrix, rho: Circuit) -> Fraction:
    return circuit_weight(from_matrix(A), rho)


def _pred_cycle(pred: list[int]):
    n = len(pred)
    state = [0] * n  # 0 unseen, 1 on current walk, 2 done
    for s in range(n):
        if state[s]:
            continue
        walk = []
        v = s
        while v != -1 and state[v] == 0:
            state[v] = 1
            walk.append(v)
            v = pred[v]
        if v != -1 and state[v] == 1:
            # walk follows predecessors, i.e. arcs backwards
            back = walk[walk.index(v):]
            return canonical_rotation(back[::-1])
        for u in walk:
            state[u] = 2
    return None


def find_positive_cycle(n: int, arcs) -> Circuit | None:
    """Bellman-Ford longest paths from a virtual source over ``(j, i, w)`` arcs.

    Works for any exactly-ordered weight type (ints, fractions). The
    predecessor graph is inspected after every round, so infeasible inputs
    usually stop long before ``n`` rounds.
    """
    x = [0] * n
    pred = [-1] * n
    for _ in range(3 * n + 1):
        changed = False
        for j, i, w in arcs:
            v = x[j] + w
            if v > x[i]:
                x[i] = v
                pred[i] = j
                changed = True
        if not changed:
            return None
        cyc = _pred_cycle(pred)
        if cyc is not None:
            return cyc
    raise AssertionError("Bellman-Ford failed to expose a circuit")  # pragma: no cover


def detect_positive_circuit(A: MpMatrix) -> Circuit | None:
    g = from_matrix(A)
    return find_positive_cycle(g.n, g.arcs)


def in_gamma(A: MpMatrix) -> bool:
    return detect_positive_circuit(A) is None


def enumerate_simple_circuits(g) -> Iterator[Circuit]:
    """Yield each elementary circuit of ``g`` once, canonically rotated.

    ``g`` is anything with ``n`` and ``arc_keys()``.
    """
    G = nx.DiGraph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.arc_keys())
    for cyc in nx.simple_cycles(G):
        yield canonical_rotation(cyc)


# -- parametric arcs ---------------------------------------------------------

def _check_square_triple(P, I, C):
    if not (P.shape == I.shape == C.shape) or P.rows != P.cols:
        raise DimensionError(f"PIC shapes {P.shape}, {I.shape}, {C.shape}")
    for M in (P, I, C):
        if any(x is TOP for x in M.flat()):
            raise TopEntryError("PIC matrices must not contain TOP")


def eval_pic(P: MpMatrix, I: MpMatrix, C: MpMatrix, lam) -> MpMatrix:
    """``lam P ⊕ lam^-1 I ⊕ C`` for a finite ``lam``."""
    _check_square_triple(P, I, C)
    lam = Fraction(lam)
    rows = []
    for rp, ri, rc in zip(P, I, C):
        row = []
        for p, i, c in zip(rp, ri, rc):
            best = c
            if p is not BOTTOM and (best is BOTTOM or p + lam > best):
                best = p + lam
            if i is not BOTTOM and (best is BOTTOM or i - lam > best):
                best = i - lam
            row.append(best)
        rows.append(tuple(row))
    return MpMatrix._raw(tuple(rows))


@dataclass(frozen=True)
class Pwl:
    """Convex piecewise-linear function of one variable.

    ``slopes[0]`` applies left of ``breakpoints[0]`` and ``slopes[k]`` right
    of ``breakpoints[k-1]``; ``value`` is the function value at ``anchor``.
    """

    breakpoints: tuple
    slopes: tuple
    anchor: Fraction
    value: Fraction

    def __post_init__(self):
        if len(self.slopes) != len(self.breakpoints) + 1:
            raise ValueError("need one more slope than breakpoints")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must increase")
        if any(a >= b for a, b in zip(self.slopes, self.slopes[1:])):
            raise ValueError("slopes must strictly increase")

    @classmethod
    def constant(cls, c) -> "Pwl":
        return cls((), (0,), Fraction(0), Fraction(c))

    @classmethod
    def envelope(cls, lines) -> "Pwl":
        """Upper envelope of ``(slope, intercept)`` lines."""
        best = {}
        for s, c in lines:
            if s not in best or c > best[s]:
                best[s] = Fraction(c)
        if not best:
            raise ValueError("envelope of no lines")
        hull = []  # (slope, intercept), slopes increasing
        for s in sorted(best):
            c = best[s]
            while hull:
                s1, c1 = hull[-1]
                x_new = (c1 - c) / (s - s1)
                if len(hull) >= 2:
                    s0, c0 = hull[-2]
                    x_old = (c0 - c1) / (s1 - s0)
                    if x_new <= x_old:
                        hull.pop()
                        continue
                break
            hull.append((s, c))
        bps = tuple((hull[k][1] - hull[k + 1][1]) / (hull[k + 1][0] - hull[k][0])
                    for k in range(len(hull) - 1))
        anchor = bps[0] if bps else Fraction(0)
        s, c = hull[0]
        return cls(bps, tuple(s for s, _ in hull), anchor, s * anchor + c)

    def slope_at(self, x) -> int:
        # slope on the piece right of x (left-continuous index)
        return self.slopes[bisect.bisect_right(self.breakpoints, x)]

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        a, v = self.anchor, self.value
        if x == a:
            return v
        bps = self.breakpoints
        if x > a:
            k = bisect.bisect_right(bps, a)
            while k < len(bps) and bps[k] < x:
                v += self.slopes[k] * (bps[k] - a)
                a = bps[k]
                k += 1
            return v + self.slopes[k] * (x - a)
        k = bisect.bisect_left(bps, a) - 1
        while k >= 0 and bps[k] > x:
            v -= self.slopes[k + 1] * (a - bps[k])
            a = bps[k]
            k -= 1
        return v - self.slopes[k + 1] * (a - x)

    def __add__(self, other: "Pwl") -> "Pwl":
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        if bps:
            probes = [bps[0] - 1] + [(a + b) / 2 for a, b in zip(bps, bps[1:])] + [bps[-1] + 1]
        else:
            probes = [Fraction(0)]
        slopes = [self.slope_at(x) + other.slope_at(x) for x in probes]
        keep_b, keep_s = [], [slopes[0]]
        for b, s in zip(bps, slopes[1:]):
            if s == keep_s[-1]:
                continue
            keep_b.append(b)
            keep_s.append(s)
        anchor = keep_b[0] if keep_b else Fraction(0)
        return Pwl(tuple(keep_b), tuple(keep_s), anchor, self(anchor) + other(anchor))

    def lines(self):
        """The ``(slope, intercept)`` of every piece; the function is their max."""
        out = []
        if not self.breakpoints:
            s = self.slopes[0]
            return [(s, self.value - s * self.anchor)]
        for k, s in enumerate(self.slopes):
            b = self.breakpoints[max(k - 1, 0)]
            out.append((s, self(b) - s * b))
        return out

    def nonpositive_set(self):
        """``{x : f(x) <= 0}`` as ``(lo, hi)`` with infinite ends, or ``None``."""
        lo, hi = BOTTOM, TOP
        for s, c in self.lines():
            if s == 0:
                if c > 0:
                    return None
            elif s > 0:
                r = -c / s
                hi = r if hi is TOP or r < hi else hi
            else:
                r = -c / s
                lo = r if lo is BOTTOM or r > lo else lo
        if lo is not BOTTOM and hi is not TOP and lo > hi:
            return None
        return lo, hi


@dataclass(frozen=True)
class ParamArcWeight:
    """``max(p + lam, i - lam, c)``; absent terms are epsilon."""

    p: ExtScalar = BOTTOM
    i: ExtScalar = BOTTOM
    c: ExtScalar = BOTTOM

    @property
    def exists(self) -> bool:
        return any(is_finite(t) for t in (self.p, self.i, self.c))

    def __call__(self, lam) -> Fraction:
        return max(t for t in self._terms(Fraction(lam)) if t is not BOTTOM)

    def _terms(self, lam):
        return (self.p + lam if is_finite(self.p) else BOTTOM,
                self.i - lam if is_finite(self.i) else BOTTOM,
                self.c)

    def envelope(self) -> Pwl:
        lines = [(s, t) for s, t in ((1, self.p), (-1, self.i), (0, self.c)) if is_finite(t)]
        if not lines:
            raise MissingArcError("arc has no finite term")
        return Pwl.envelope(lines)

    def label(self) -> str:
        parts = []
        if is_finite(self.p):
            parts.append("λ" if self.p == 0 else f"{format_number(self.p)}+λ")
        if is_finite(self.i):
            parts.append("-λ" if self.i == 0 else f"{format_number(self.i)}-λ")
        if is_finite(self.c):
            parts.append(format_number(self.c))
        return parts[0] if len(parts) == 1 else f"max({', '.join(parts)})"


@dataclass(frozen=True)
class ParamGraph:
    """Precedence graph of ``lam P ⊕ lam^-1 I ⊕ C``: one arc per ordered pair."""

    n: int
    arcs: tuple  # (from, to, ParamArcWeight), sorted by (from, to)

    def arc_keys(self):
        return [(j, i) for j, i, _ in self.arcs]

    def at(self, lam) -> PrecGraph:
        return PrecGraph(self.n, tuple((j, i, w(lam)) for j, i, w in self.arcs))


def param_graph(P: MpMatrix, I: MpMatrix, C: MpMatrix) -> ParamGraph:
    _check_square_triple(P, I, C)
    arcs = []
    for j in range(P.cols):
        for i in range(P.rows):
            w = ParamArcWeight(P[i, j], I[i, j], C[i, j])
            if w.exists:
                arcs.append((j, i, w))
    return ParamGraph(P.rows, tuple(arcs))


def circuit_pwl(circuit: Circuit, P: MpMatrix, I: MpMatrix, C: MpMatrix) -> Pwl:
    total = Pwl.constant(0)
    for j, i in _circuit_arcs(circuit):
        w = ParamArcWeight(P[i, j], I[i, j], C[i, j])
        if not w.exists:
            raise MissingArcError(f"no arc {j + 1} -> {i + 1}")
        total = total + w.envelope()
    return total


# -- DOT export --------------------------------------------------------------

def format_number(q: Fraction) -> str:
    """Exact decimal when the expansion terminates, ``p/q`` otherwise."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q.numerator) * 10 ** digits // q.denominator
    sign = "-" if q < 0 else ""
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{str(frac).rjust(digits, '0')}"


def to_dot(g, name: str = "G") -> str:
    """DOT text for a :class:`PrecGraph` or :class:`ParamGraph`."""
    lines = [f"digraph {name} {{"]
    lines += [f"  {v + 1};" for v in range(g.n)]
    for j, i, w in sorted(g.arcs, key=lambda a: (a[0], a[1])):
        label = w.label() if isinstance(w, ParamArcWeight) else format_number(w)
        lines.append(f'  {j + 1} -> {i + 1} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
