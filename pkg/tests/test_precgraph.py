from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import (N, brute_circuits, brute_max_circuit_weight, brute_path_max, matrices,
                      matrix_arcs, pic_weight, rationals)
from ptegkit.maxplus import BOTTOM, TOP, MpMatrix, PositiveCircuitError, kleene_star, m_otimes, m_power
from ptegkit.ncp import PicTriple
from ptegkit.precgraph import (MissingArcError, NotACircuitError, PrecGraph, Pwl,
                               TopEntryError, circuit_pwl, circuit_weight, detect_positive_circuit,
                               enumerate_simple_circuits, eval_pic, format_number, from_matrix,
                               in_gamma, param_graph, to_dot)

F = Fraction

EXAMPLE_ARCS = {(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1), (0, 2)}


def at(t, lam):
    return eval_pic(t.P, t.I, t.C, lam)


class TestFromMatrix:
    def test_example_arcs(self, triple1):
        g = from_matrix(at(triple1, 4))
        assert set(g.arc_keys()) == EXAMPLE_ARCS
        assert len(g.arcs) == 8

    def test_trivial(self):
        assert from_matrix(MpMatrix.zeros(3)).arcs == ()
        g = from_matrix(MpMatrix.identity(3))
        assert g.arcs == tuple((v, v, 0) for v in range(3))

    def test_top_rejected(self):
        with pytest.raises(TopEntryError):
            from_matrix(MpMatrix([[TOP]]))


class TestCircuitWeight:
    def test_example_circuits(self, triple1):
        g = from_matrix(at(triple1, 4))
        assert circuit_weight(g, (0, 1)) == -1
        assert circuit_weight(g, (2,)) == 0

    def test_not_a_circuit(self):
        g = from_matrix(MpMatrix.zeros(1))
        with pytest.raises(NotACircuitError):
            circuit_weight(g, (0,))
        with pytest.raises(NotACircuitError):
            circuit_weight(g, ())


class TestDetection:
    def test_example(self, triple1):
        assert detect_positive_circuit(at(triple1, 4)) is None
        w = detect_positive_circuit(at(triple1, 5))
        assert w == (2,)
        assert circuit_weight(from_matrix(at(triple1, 5)), w) == 1

    def test_empty(self):
        assert detect_positive_circuit(MpMatrix.zeros(4)) is None
        assert in_gamma(MpMatrix.zeros(4))

    def test_deterministic(self):
        A = MpMatrix([[1, 2, N], [0, N, 3], [N, 1, N]])
        assert len({detect_positive_circuit(A) for _ in range(5)}) == 1

    @settings(max_examples=300)
    @given(matrices(max_n=6))
    def test_agrees_with_enumeration(self, A):
        best = brute_max_circuit_weight(A)
        w = detect_positive_circuit(A)
        assert (w is not None) == (best is not None and best > 0)
        if w is not None:
            assert circuit_weight(from_matrix(A), w) > 0

    @settings(max_examples=200)
    @given(matrices(max_n=5))
    def test_three_way_gamma(self, A):
        """in_gamma <=> star succeeds <=> A x <= x has a finite solution."""
        ok = in_gamma(A)
        try:
            S = kleene_star(A)
        except PositiveCircuitError as exc:
            assert not ok
            # summing A_ij + x_j <= x_i around the circuit gives weight <= 0
            assert circuit_weight(from_matrix(A), exc.circuit) > 0
        else:
            assert ok
            x = m_otimes(S, MpMatrix.column([0] * A.rows)).vector()
            assert all(v is not BOTTOM for v in x)
            assert all(a <= b for a, b in zip(m_otimes(A, MpMatrix.column(x)).vector(), x))


class TestEnumeration:
    def test_example(self, triple1):
        got = sorted(enumerate_simple_circuits(param_graph(triple1.P, triple1.I, triple1.C)))
        assert got == sorted([(0,), (1,), (2,), (0, 1), (1, 2), (0, 2, 1)])
        assert got == sorted(brute_circuits(3, EXAMPLE_ARCS))

    def test_complete_digraph(self):
        A = MpMatrix([[0] * 3] * 3)
        got = list(enumerate_simple_circuits(from_matrix(A)))
        assert len(got) == 8 == len(brute_circuits(3, matrix_arcs(A)))

    def test_empty(self):
        assert list(enumerate_simple_circuits(from_matrix(MpMatrix.zeros(4)))) == []

    @settings(max_examples=150)
    @given(matrices(max_n=6))
    def test_matches_brute_force(self, A):
        got = list(enumerate_simple_circuits(from_matrix(A)))
        assert len(got) == len(set(got))
        assert sorted(got) == sorted(brute_circuits(A.rows, matrix_arcs(A)))
        assert all(c[0] == min(c) for c in got)


class TestPowers:
    @settings(max_examples=100)
    @given(matrices(max_n=4), st.integers(1, 4))
    def test_power_is_max_path(self, A, r):
        Ar = m_power(A, r)
        for i, j in product(range(A.rows), repeat=2):
            assert Ar[i, j] == brute_path_max(A, j, i, r)


class TestParametric:
    def test_eval_entry(self, triple1):
        assert at(triple1, 4)[0, 1] == -3

    @given(st.data())
    def test_eval_zero_is_oplus(self, data):
        n = data.draw(st.integers(1, 4))
        P, I, C = (data.draw(matrices(n)) for _ in range(3))
        assert eval_pic(P, I, C, 0) == (P | I | C)

    @given(rationals)
    def test_all_bottom(self, lam):
        Z = MpMatrix.zeros(3)
        assert eval_pic(Z, Z, Z, lam) == Z

    def test_circuit_pwl_example(self, triple1):
        f = circuit_pwl((0, 2, 1), triple1.P, triple1.I, triple1.C)
        for lam in (F(-5), F(0), F(3), F(7, 2), F(4), F(10)):
            assert f(lam) == max(F(13, 2) - 2 * lam, F(7, 2) - lam)
        assert f.slopes == (-2, -1)
        assert f.nonpositive_set() == (F(7, 2), TOP)

    def test_self_loop_pwl(self, triple1):
        f = circuit_pwl((2,), triple1.P, triple1.I, triple1.C)
        assert f.slopes == (-1, 1) and f.breakpoints == (2,)
        assert f(5) == 1 and f(0) == 0 and f(2) == -2
        assert f.nonpositive_set() == (0, 4)

    def test_constant_pwl(self):
        C = MpMatrix([[N, F(-1)], [F(2), N]])
        Z = MpMatrix.zeros(2)
        f = circuit_pwl((0, 1), Z, Z, C)
        assert f.slopes == (0,) and f(123) == 1
        assert f.nonpositive_set() is None

    def test_missing_arc(self, triple1):
        Z = MpMatrix.zeros(3)
        with pytest.raises(MissingArcError):
            circuit_pwl((0, 1), Z, Z, Z)

    @settings(max_examples=200)
    @given(st.data())
    def test_pwl_matches_definition_and_is_convex(self, data):
        n = data.draw(st.integers(1, 4))
        P, I, C = (data.draw(matrices(n)) for _ in range(3))
        t = PicTriple(P, I, C)
        for c in enumerate_simple_circuits(param_graph(P, I, C)):
            f = circuit_pwl(c, P, I, C)
            assert list(f.slopes) == sorted(set(f.slopes))
            assert all(abs(s) <= len(c) for s in f.slopes)
            for lam in data.draw(st.lists(rationals, min_size=1, max_size=4)):
                assert f(lam) == sum(pic_weight(t, c[k], c[(k + 1) % len(c)], lam) for k in range(len(c)))


class TestPwl:
    @given(st.lists(st.tuples(st.sampled_from([-1, 0, 1]), rationals), min_size=1, max_size=3),
           st.lists(rationals, min_size=1, max_size=5))
    def test_envelope(self, lines, xs):
        f = Pwl.envelope(lines)
        for x in xs:
            assert f(x) == max(s * x + c for s, c in lines)

    @given(st.lists(st.lists(st.tuples(st.sampled_from([-1, 0, 1]), rationals), min_size=1, max_size=3),
                    min_size=1, max_size=4),
           st.lists(rationals, min_size=1, max_size=5))
    def test_sum_and_sublevel(self, groups, xs):
        fs = [Pwl.envelope(g) for g in groups]
        total = fs[0]
        for f in fs[1:]:
            total = total + f
        ends = total.nonpositive_set()
        for x in xs + list(total.breakpoints):
            v = sum(f(x) for f in fs)
            assert total(x) == v
            inside = ends is not None and ends[0] <= x <= ends[1]
            assert inside == (v <= 0)
        if ends is not None:
            for e in ends:
                if e not in (BOTTOM, TOP):
                    assert total(e) <= 0


class TestDot:
    def test_parametric_labels(self, triple1):
        text = to_dot(param_graph(triple1.P, triple1.I, triple1.C))
        assert text.splitlines()[0] == "digraph G {"
        for arc in ('1 -> 1 [label="-λ"]', '1 -> 2 [label="2"]', '1 -> 3 [label="6"]',
                    '2 -> 1 [label="max(-λ, -3)"]', '2 -> 3 [label="0.5"]',
                    '3 -> 2 [label="0.5-λ"]', '3 -> 3 [label="max(-4+λ, -λ)"]'):
            assert f"  {arc};" in text
        assert text.count("->") == 8

    def test_order_and_numeric(self, triple1):
        text = to_dot(from_matrix(at(triple1, 4)))
        arcs = [ln.strip() for ln in text.splitlines() if "->" in ln]
        keys = [tuple(int(v) for v in a.split(" [")[0].split(" -> ")) for a in arcs]
        assert keys == sorted(keys)
        assert '3 -> 2 [label="-3.5"];' in arcs

    def test_header_only(self):
        assert to_dot(PrecGraph(0, ())) == "digraph G {\n}\n"

    def test_format_number(self):
        assert format_number(F(1, 2)) == "0.5"
        assert format_number(F(-13, 2)) == "-6.5"
        assert format_number(F(1, 3)) == "1/3"
        assert format_number(F(-1, 40)) == "-0.025"
