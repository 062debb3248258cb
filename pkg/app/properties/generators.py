"""Seeded random inputs shared by the property suites and the tests."""
import random
from fractions import Fraction
from typing import List

from app.core.exceptions import ValidationError
from app.models.domain import Partition, VectorPair
from app.services.invariants import validate_pair
from app.services.lattice import Lattice, canonicalize
from app.services.padic import PMatrix


def random_pair(rng: random.Random, max_size: int = 6) -> VectorPair:
    while True:
        size = rng.randint(2, max_size)
        w1 = sorted((rng.randint(-2, 3) for _ in range(size)), reverse=True)
        w2 = sorted((rng.randint(-3, 2) for _ in range(size)), reverse=True)
        if not (any(w1) and any(w2) and sum(w1) > 0 and sum(w2) <= 0):
            continue
        try:
            return validate_pair(w1, w2)
        except ValidationError:
            # proportional draws
            continue


def random_partition(rng: random.Random, size: int) -> Partition:
    labels = [rng.randint(0, size - 1) for _ in range(size)]
    return Partition.from_labels(labels)


def random_scalar(rng: random.Random, p: int, max_den: int = 2, bound: int = 6) -> Fraction:
    return Fraction(rng.randint(-bound, bound), p ** rng.randint(0, max_den))


def random_matrix(rng: random.Random, p: int, dim: int) -> PMatrix:
    """Random invertible matrix over Z[1/p]."""
    while True:
        g = PMatrix([[random_scalar(rng, p) for _ in range(dim)] for _ in range(dim)], p)
        if g.det() != 0:
            return g


def random_lattice(rng: random.Random, p: int, dim: int) -> Lattice:
    return canonicalize(random_matrix(rng, p, dim))


def random_unipotent(rng: random.Random, p: int, dim: int) -> PMatrix:
    return PMatrix(
        [[1 if i == j else (random_scalar(rng, p) if j > i else 0) for j in range(dim)] for i in range(dim)],
        p,
    )


def random_unimodular(rng: random.Random, p: int, dim: int) -> PMatrix:
    """Integer matrix invertible over Z_p: a product of elementary moves and unit scalings."""
    units = [u for u in range(1, 3 * p) if u % p]
    rows: List[List[int]] = [[int(i == j) for j in range(dim)] for i in range(dim)]
    for _ in range(3 * dim):
        i, j = rng.sample(range(dim), 2)
        f = rng.randint(-3, 3)
        rows[i] = [a + f * b for a, b in zip(rows[i], rows[j])]
    k = rng.randrange(dim)
    rows[k] = [rng.choice(units) * x for x in rows[k]]
    return PMatrix(rows, p)


def random_involution(rng: random.Random, p: int, dim: int) -> PMatrix:
    """u diag(d) u^-1 for random unipotent u and signs d."""
    u = random_unipotent(rng, p, dim)
    d = PMatrix.diagonal([rng.choice((1, -1)) for _ in range(dim)], p)
    return u @ d @ u.inverse()
