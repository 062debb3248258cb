"""
Exact arithmetic over Z[1/p].

Scalars are Fractions whose reduced denominator is a power of p; matrices
hold them row-wise. Nothing here ever needs the completion Q_p: lattices,
flags and valuations only see finitely many p-adic digits.
"""
import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union
from app.core.exceptions import invalid

Number = Union[int, Fraction, str]


def valuation(x: Number, p: int) -> Union[int, float]:
    """p-adic valuation; valuation(0) is math.inf."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def int_valuation(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_p_scalar(x: Number, p: int) -> bool:
    den = Fraction(x).denominator
    while den % p == 0:
        den //= p
    return den == 1


def p_scalar(x: Number, p: int) -> Fraction:
    """Parse and check that the denominator is a power of p."""
    value = Fraction(x)
    if not is_p_scalar(value, p):
        raise invalid("NotPScalar", f"{value} has a denominator that is not a power of {p}")
    return value


def is_prime(p: int) -> bool:
    """Primality via sympy."""
    from sympy import isprime
    return bool(isprime(p))


class PMatrix:
    """Square matrix over Z[1/p]; immutable."""
    __slots__ = ("rows", "p")

    def __init__(self, rows: Iterable[Iterable[Number]], p: int):
        self.p = p
        self.rows: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(p_scalar(x, p) for x in row) for row in rows
        )
        if any(len(r) != len(self.rows) for r in self.rows):
            raise invalid("NotSquare", "matrix must be square")

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def identity(cls, n: int, p: int) -> "PMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], p)

    @classmethod
    def diagonal(cls, entries: Sequence[Number], p: int) -> "PMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], p)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Number]], p: int) -> "PMatrix":
        n = len(columns)
        return cls([[columns[j][i] for j in range(n)] for i in range(n)], p)

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> List[Tuple[Fraction, ...]]:
        return [tuple(row[j] for row in self.rows) for j in range(self.n)]

    def diag(self) -> Tuple[Fraction, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(i))

    def is_diagonal(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j)

    def is_unipotent_upper(self) -> bool:
        return self.is_upper_triangular() and all(x == 1 for x in self.diag())

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------
    def __matmul__(self, other: "PMatrix") -> "PMatrix":
        cols = other.columns
        return PMatrix([[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.rows], self.p)

    def apply(self, vector: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in self.rows)

    def scale(self, c: Number) -> "PMatrix":
        c = Fraction(c)
        return PMatrix([[c * x for x in row] for row in self.rows], self.p)

    def __add__(self, other: "PMatrix") -> "PMatrix":
        return PMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.p)

    def __sub__(self, other: "PMatrix") -> "PMatrix":
        return PMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.p)

    def det(self) -> Fraction:
        m = [list(r) for r in self.rows]
        n = self.n
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            for r in range(c + 1, n):
                f = m[r][c] / m[c][c]
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return det

    def inverse(self) -> "PMatrix":
        """Inverse over Z[1/p]; needs det = +-p^k."""
        n = self.n
        d = self.det()
        if d == 0:
            raise invalid("SingularMatrix", "matrix is not invertible")
        if not is_p_scalar(1 / d, self.p):
            raise invalid("NotPScalar", f"det {d} is not a unit of Z[1/{self.p}]")
        m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next(r for r in range(c, n) if m[r][c] != 0)
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [x * inv for x in m[c]]
            for r in range(n):
                if r != c and m[r][c] != 0:
                    f = m[r][c]
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return PMatrix([row[n:] for row in m], self.p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PMatrix) and self.p == other.p and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.p, self.rows))

    def __repr__(self) -> str:
        return f"PMatrix({[[str(x) for x in r] for r in self.rows]}, p={self.p})"

    def to_json(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.rows]
