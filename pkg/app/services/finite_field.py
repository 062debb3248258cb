"""
Linear algebra over the prime field F_p.

Subspaces are represented by their reduced row echelon basis, which is unique,
so enumerating echelon shapes enumerates each subspace exactly once.
"""
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, List, Sequence, Tuple

Vector = Tuple[int, ...]


def rref(rows: Sequence[Sequence[int]], p: int) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form mod p; returns (nonzero rows, pivot columns)."""
    m = [[x % p for x in row] for row in rows]
    pivots: List[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def kernel(rows: Sequence[Sequence[int]], ncols: int, p: int) -> List[Vector]:
    """Basis of {x : rows . x = 0} over F_p, free variables in increasing order."""
    reduced, pivots = rref(rows, p) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis: List[Vector] = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, pc in zip(reduced, pivots):
            x[pc] = (-row[f]) % p
        basis.append(tuple(x))
    return basis


def span(basis: Sequence[Vector], p: int) -> List[Vector]:
    """Every vector of the span, in the order of coefficient tuples."""
    if not basis:
        return []
    d = len(basis[0])
    out = []
    for coeffs in product(range(p), repeat=len(basis)):
        out.append(tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(d)))
    return out


def gaussian_binomial(d: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^d."""
    if k < 0 or k > d:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _echelon_bases(d: int, k: int, p: int) -> Iterator[Tuple[Vector, ...]]:
    for pivots in combinations(range(d), k):
        # free slots: entries right of a row's pivot that are not pivot columns
        slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, d) if c not in pivots]
        for values in product(range(p), repeat=len(slots)):
            rows = [[0] * d for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), val in zip(slots, values):
                rows[r][c] = val
            yield tuple(tuple(row) for row in rows)


@lru_cache(maxsize=None)
def subspaces(d: int, p: int, k: int) -> Tuple[Tuple[Vector, ...], ...]:
    """All k-dimensional subspaces of F_p^d as RREF bases (cached per shape)."""
    return tuple(_echelon_bases(d, k, p))


def all_subspaces(d: int, p: int, proper: bool = False) -> Iterator[Tuple[Vector, ...]]:
    """Subspaces of every dimension; proper=True drops 0 and the whole space."""
    dims = range(1, d) if proper else range(0, d + 1)
    for k in dims:
        yield from subspaces(d, p, k)
