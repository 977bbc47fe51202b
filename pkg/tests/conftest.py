from fractions import Fraction
from itertools import permutations, product
from pathlib import Path

import pytest
from hypothesis import strategies as st

from ptegkit.maxplus import BOTTOM, TOP, MpMatrix
from ptegkit.ncp import PicTriple
from ptegkit.pteg import EventGraphSpec, Place, normalize

N = BOTTOM
F = Fraction
ROOT = Path(__file__).resolve().parent.parent
EXAMPLE_MODEL = ROOT / "models" / "example.yaml"
INFEASIBLE_MODEL = ROOT / "models" / "infeasible.yaml"

# PASS/FAIL lines from the acceptance module, echoed in the terminal summary
ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)


# star of the d=2, lam=4 tensor system, as printed in the worked example
EXAMPLE_STAR = [
    ["0", "-3", "-6.5", "-4.5", "-7.5", "-10.5"],
    ["2.5", "0", "-3.5", "-1.5", "-4.5", "-7.5"],
    ["6", "3", "0", "2", "-1", "-4"],
    ["3.5", "0.5", "-2.5", "0", "-3", "-6.5"],
    ["6.5", "3.5", "0.5", "2.5", "0", "-3.5"],
    ["10", "7", "4", "6", "3", "0"],
]


def example_spec() -> EventGraphSpec:
    return EventGraphSpec(("t1", "t2", "t3"), (
        Place.make("t1", "t2", 0, 2, 3),
        Place.make("t2", "t1", 1, 0, "inf"),
        Place.make("t2", "t3", 0, "0.5", "inf"),
        Place.make("t3", "t2", 1, "0.5", "inf"),
        Place.make("t3", "t3", 1, 0, 4),
        Place.make("t1", "t3", 0, 6, "inf"),
    ))


@pytest.fixture
def spec1():
    return example_spec()


@pytest.fixture
def pteg1():
    return normalize(example_spec())[0]


@pytest.fixture
def triple1():
    return PicTriple(
        MpMatrix([[N, N, N], [N, N, N], [N, N, -4]]),
        MpMatrix([[0, 0, N], [N, 0, "0.5"], [N, N, 0]]),
        MpMatrix([[N, -3, N], [2, N, N], [6, "0.5", N]]),
    )


# -- brute-force oracles, deliberately independent of the package ----------

def brute_circuits(n, arcs):
    """Every elementary circuit as a node tuple starting at its smallest node."""
    arcs = set(arcs)
    out = []
    for start in range(n):
        rest = [v for v in range(start + 1, n)]
        for L in range(0, len(rest) + 1):
            for perm in permutations(rest, L):
                seq = (start,) + perm
                if all((seq[k], seq[(k + 1) % len(seq)]) in arcs for k in range(len(seq))):
                    out.append(seq)
    return out


def matrix_arcs(A):
    return {(j, i): A[i, j] for i in range(A.rows) for j in range(A.cols) if A[i, j] is not BOTTOM}


def brute_max_circuit_weight(A):
    arcs = matrix_arcs(A)
    best = None
    for c in brute_circuits(A.rows, arcs):
        w = sum(arcs[(c[k], c[(k + 1) % len(c)])] for k in range(len(c)))
        best = w if best is None or w > best else best
    return best


def brute_path_max(A, j, i, r):
    """Max weight over length-r walks j -> i, or BOTTOM."""
    arcs = matrix_arcs(A)
    best = BOTTOM
    for mid in product(range(A.rows), repeat=r - 1):
        seq = (j,) + mid + (i,)
        if all((seq[k], seq[k + 1]) in arcs for k in range(r)):
            w = sum(arcs[(seq[k], seq[k + 1])] for k in range(r))
            best = w if best is BOTTOM or w > best else best
    return best


def pic_weight(t, j, i, lam):
    """``max(P+lam, I-lam, C)`` for arc j -> i straight from the definition."""
    terms = []
    if t.P[i, j] is not BOTTOM:
        terms.append(t.P[i, j] + lam)
    if t.I[i, j] is not BOTTOM:
        terms.append(t.I[i, j] - lam)
    if t.C[i, j] is not BOTTOM:
        terms.append(t.C[i, j])
    return max(terms) if terms else None


# -- hypothesis strategies ------------------------------------------------

rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 4))
finite = rationals
extended = st.one_of(rationals, st.just(BOTTOM), st.just(TOP))
rmax = st.one_of(rationals, rationals, st.just(BOTTOM))  # no TOP, finite-biased
no_bottom = st.one_of(rationals, rationals, st.just(TOP))


@st.composite
def matrices(draw, n=None, m=None, elements=rmax, max_n=4):
    n = draw(st.integers(1, max_n)) if n is None else n
    m = n if m is None else m
    return MpMatrix([[draw(elements) for _ in range(m)] for _ in range(n)])


@st.composite
def vectors(draw, n, elements=finite):
    return [draw(elements) for _ in range(n)]
