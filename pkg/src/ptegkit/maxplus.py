"""Exact max-plus arithmetic over the completed semifield.

Finite scalars are :class:`fractions.Fraction`; the two infinite elements are
the singletons :data:`BOTTOM` (epsilon, the zero of the dioid) and :data:`TOP`.
Both compare correctly against fractions, so ``max``/``min`` implement the
join and meet directly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union


class Infinity:
    """One of the two infinite elements, ordered around every rational."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        object.__setattr__(self, "sign", sign)

    def __setattr__(self, name, value):
        raise AttributeError("Infinity is immutable")

    def __repr__(self):
        return "BOTTOM" if self.sign < 0 else "TOP"

    def __str__(self):
        return "-inf" if self.sign < 0 else "inf"

    def __hash__(self):
        return hash(("maxplus-inf", self.sign))

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign

    def _key(self, other):
        if isinstance(other, Infinity):
            return other.sign
        if isinstance(other, (int, Fraction)):
            return 0
        return None

    def __lt__(self, other):
        k = self._key(other)
        return NotImplemented if k is None else self.sign < k

    def __le__(self, other):
        k = self._key(other)
        return NotImplemented if k is None else self.sign <= k

    def __gt__(self, other):
        k = self._key(other)
        return NotImplemented if k is None else self.sign > k

    def __ge__(self, other):
        k = self._key(other)
        return NotImplemented if k is None else self.sign >= k

    def __reduce__(self):
        return (_infinity, (self.sign,))


BOTTOM = Infinity(-1)
TOP = Infinity(1)
EPS = BOTTOM
E = Fraction(0)


def _infinity(sign):
    return BOTTOM if sign < 0 else TOP


ExtScalar = Union[Fraction, Infinity]

_RATIONAL_RE = re.compile(r"^\s*([+-]?)(\d+)(?:\.(\d+))?(?:/(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer or a finite decimal into an exact fraction.

    Scientific notation and floats are rejected.
    """
    m = _RATIONAL_RE.match(text)
    if m is None or (m.group(3) is not None and m.group(4) is not None):
        raise ValueError(f"not an exact rational: {text!r}")
    sign, whole, frac, den = m.groups()
    if den is not None:
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        value = Fraction(int(whole), int(den))
    elif frac is not None:
        value = Fraction(int(whole + frac), 10 ** len(frac))
    else:
        value = Fraction(int(whole))
    return -value if sign == "-" else value


def scalar(x) -> ExtScalar:
    """Coerce ``x`` to an extended scalar. Floats are refused on purpose."""
    if isinstance(x, Infinity):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("-inf", "bottom", "eps"):
            return BOTTOM
        if s in ("inf", "+inf", "top"):
            return TOP
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact max-plus scalar")


def is_finite(a: ExtScalar) -> bool:
    return not isinstance(a, Infinity)


# -- scalar operations -------------------------------------------------------

def s_oplus(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    return a if a >= b else b


def s_wedge(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    return a if a <= b else b


def s_otimes(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    # bottom absorbs, even against top
    if a is BOTTOM or b is BOTTOM:
        return BOTTOM
    if a is TOP or b is TOP:
        return TOP
    return a + b


def s_odot(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    if a is TOP or b is TOP:
        return TOP
    if a is BOTTOM or b is BOTTOM:
        return BOTTOM
    return a + b


def s_inverse(a: ExtScalar) -> ExtScalar:
    if a is BOTTOM:
        return TOP
    if a is TOP:
        return BOTTOM
    return -a


# -- matrices ----------------------------------------------------------------

class DimensionError(ValueError):
    pass


class MpMatrix:
    """Immutable dense matrix over the completed max-plus semifield.

    ``A @ B`` is the max-plus product, ``A | B`` the elementwise max and
    ``A & B`` the elementwise min.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries: Iterable[Sequence]):
        data = tuple(tuple(scalar(x) for x in row) for row in entries)
        cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "_data", data)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", cols)

    @classmethod
    def _raw(cls, data):
        m = object.__new__(cls)
        object.__setattr__(m, "_data", data)
        object.__setattr__(m, "rows", len(data))
        object.__setattr__(m, "cols", len(data[0]) if data else 0)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("MpMatrix is immutable")

    @classmethod
    def filled(cls, rows: int, cols: int, value: ExtScalar = BOTTOM) -> "MpMatrix":
        value = scalar(value)
        return cls._raw(tuple((value,) * cols for _ in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "MpMatrix":
        """The all-epsilon matrix."""
        return cls.filled(rows, rows if cols is None else cols, BOTTOM)

    @classmethod
    def identity(cls, n: int) -> "MpMatrix":
        return cls._raw(tuple(tuple(E if i == j else BOTTOM for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, values: Iterable) -> "MpMatrix":
        return cls([[v] for v in values])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def tolist(self) -> list[list[ExtScalar]]:
        return [list(r) for r in self._data]

    def flat(self) -> tuple:
        return tuple(x for r in self._data for x in r)

    def vector(self) -> tuple:
        if self.cols != 1:
            raise DimensionError("not a column vector")
        return tuple(r[0] for r in self._data)

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        return isinstance(other, MpMatrix) and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __le__(self, other: "MpMatrix") -> bool:
        _same_shape(self, other)
        return all(a <= b for ra, rb in zip(self._data, other._data) for a, b in zip(ra, rb))

    def __ge__(self, other: "MpMatrix") -> bool:
        return other <= self

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"MpMatrix([{body}])"

    def __matmul__(self, other):
        return m_otimes(self, other)

    def __or__(self, other):
        return m_oplus(self, other)

    def __and__(self, other):
        return m_wedge(self, other)

    def map(self, fn) -> "MpMatrix":
        return MpMatrix._raw(tuple(tuple(fn(x) for x in r) for r in self._data))


def _same_shape(A: MpMatrix, B: MpMatrix):
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")


def m_oplus(A: MpMatrix, B: MpMatrix) -> MpMatrix:
    _same_shape(A, B)
    return MpMatrix._raw(tuple(tuple(s_oplus(a, b) for a, b in zip(ra, rb))
                               for ra, rb in zip(A._data, B._data)))


def m_wedge(A: MpMatrix, B: MpMatrix) -> MpMatrix:
    _same_shape(A, B)
    return MpMatrix._raw(tuple(tuple(s_wedge(a, b) for a, b in zip(ra, rb))
                               for ra, rb in zip(A._data, B._data)))


def _product(A: MpMatrix, C: MpMatrix, mul, join, unit) -> MpMatrix:
    if A.cols != C.rows:
        raise DimensionError(f"inner dimensions {A.shape} x {C.shape}")
    cols = list(zip(*C._data)) if C.rows else [()] * C.cols
    out = []
    for ra in A._data:
        row = []
        for cb in cols:
            acc = unit
            for a, c in zip(ra, cb):
                acc = join(acc, mul(a, c))
            row.append(acc)
        out.append(tuple(row))
    return MpMatrix._raw(tuple(out))


def m_otimes(A: MpMatrix, C: MpMatrix) -> MpMatrix:
    return _product(A, C, s_otimes, s_oplus, BOTTOM)


def m_odot(A: MpMatrix, C: MpMatrix) -> MpMatrix:
    return _product(A, C, s_odot, s_wedge, TOP)


def m_conjugate(A: MpMatrix) -> MpMatrix:
    """Transpose with every entry inverted (``-A^T`` in standard notation)."""
    return MpMatrix._raw(tuple(tuple(s_inverse(A._data[j][i]) for j in range(A.rows))
                               for i in range(A.cols)))


def scalar_mul(lam: ExtScalar, A: MpMatrix) -> MpMatrix:
    lam = scalar(lam)
    return A.map(lambda a: s_otimes(lam, a))


def m_power(A: MpMatrix, r: int) -> MpMatrix:
    if A.rows != A.cols:
        raise DimensionError("power of a non-square matrix")
    out = MpMatrix.identity(A.rows)
    for _ in range(r):
        out = m_otimes(out, A)
    return out


class PositiveCircuitError(ValueError):
    """The precedence graph has a circuit of strictly positive weight."""

    def __init__(self, circuit, weight=None):
        self.circuit = tuple(circuit)
        self.weight = weight
        path = " -> ".join(str(v + 1) for v in self.circuit + self.circuit[:1])
        super().__init__(f"positive circuit {path}" + (f" (weight {weight})" if weight is not None else ""))


def kleene_star(A: MpMatrix) -> MpMatrix:
    """``E ⊕ A ⊕ A² ⊕ ...`` by in-place Floyd-Warshall relaxation.

    Raises :class:`PositiveCircuitError` as soon as a pivot exposes a
    strictly positive diagonal entry.
    """
    n = A.rows
    if A.cols != n:
        raise DimensionError("star of a non-square matrix")
    if any(x is TOP for x in A.flat()):
        raise ValueError("star requires entries without TOP")
    M = [list(r) for r in A._data]
    for k in range(n):
        rk = M[k]
        for i in range(n):
            mik = M[i][k]
            if mik is BOTTOM:
                continue
            ri = M[i]
            for j in range(n):
                mkj = rk[j]
                if mkj is BOTTOM:
                    continue
                v = mik + mkj
                cur = ri[j]
                if cur is BOTTOM or v > cur:
                    ri[j] = v
        if any(M[i][i] is not BOTTOM and M[i][i] > 0 for i in range(n)):
            from .precgraph import detect_positive_circuit, circuit_weight_matrix

            witness = detect_positive_circuit(A)
            raise PositiveCircuitError(witness, circuit_weight_matrix(A, witness))
    for i in range(n):
        if M[i][i] is BOTTOM or M[i][i] < 0:
            M[i][i] = E
    return MpMatrix._raw(tuple(tuple(r) for r in M))


def tensor(A: MpMatrix, B: MpMatrix) -> MpMatrix:
    """Kronecker product: block ``(i, j)`` is ``A[i, j] ⊗ B``."""
    out = []
    for ra in A._data:
        for rb in B._data:
            out.append(tuple(s_otimes(a, b) for a in ra for b in rb))
    return MpMatrix._raw(tuple(out))


def leq_vec(x: Sequence, y: Sequence) -> bool:
    return all(a <= b for a, b in zip(x, y))
