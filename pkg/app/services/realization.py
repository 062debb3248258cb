"""
Points of the geometric realization.

A point is a convex combination of the vertices of one simplex. The extended
model maps homeomorphically onto (quotient model) x R through
(class projection, affine epsilon); `lift_to_extended` is the inverse on one
simplex and `interval_cover` is the bookkeeping that makes it unique.
"""
import math
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from app.core.exceptions import invalid
from app.services import lattice as lat
from app.services.lattice import Lattice, LatticeClass

Point = List[Tuple[Lattice, Fraction]]


def _check_weights(weights: Sequence[Fraction]) -> List[Fraction]:
    ws = [Fraction(w) for w in weights]
    if any(w < 0 for w in ws) or sum(ws) != 1:
        raise invalid("BadWeights", "weights must be non-negative and sum to 1")
    return ws


def cover_starts(alpha: Sequence[Fraction], i: int) -> Fraction:
    """c_i = sum_j alpha_{(i+j) mod n} (i+j)/n."""
    n = len(alpha)
    return sum((alpha[(i + j) % n] * Fraction(i + j, n) for j in range(n)), Fraction(0))


def interval_cover(alpha: Sequence[Fraction], r: Fraction) -> Tuple[int, Fraction]:
    """
    The unique i with c_i < r <= c_i + alpha_{i mod n}, and
    beta = 1 - (r - c_i) / alpha_{i mod n} in [0, 1), so that
    r = c_i + alpha_{i mod n} (1 - beta).

    Args:
        alpha: Non-negative weights summing to 1
        r: Any rational

    Returns:
        (i, beta)
    """
    alpha = _check_weights(alpha)
    r = Fraction(r)
    n = len(alpha)
    c0 = cover_starts(alpha, 0)
    # c_{qn} = c_0 + q
    q = math.floor(r - c0)
    i, ci = q * n, c0 + q
    while True:
        a = alpha[i % n]
        if ci < r <= ci + a:
            return i, 1 - (r - ci) / a
        if ci >= r:
            i -= 1
            ci -= alpha[i % n]
        else:
            ci += a
            i += 1


def epsilon_affine(point: Sequence[Tuple[Lattice, Fraction]]) -> Fraction:
    """Affine extension of epsilon over one simplex."""
    lattices = [v for v, _ in point]
    weights = _check_weights([w for _, w in point])
    if not lattices or not lat.chain_is_simplex(lattices):
        raise invalid("NotASimplex", "vertices do not form a flag")
    return sum((w * lat.epsilon(v) for v, w in zip(lattices, weights)), Fraction(0))


def lift_to_extended(classes: Sequence[LatticeClass], weights: Sequence[Fraction], r: Fraction) -> Point:
    """
    The unique point of the extended model over the given quotient point with
    affine epsilon equal to r.

    Each class contributes the representative L_j with epsilon(L_j) = j/n in
    [0, 1); vertex k of the lifted simplex is p^-(k div n) L_{k mod n}, whose
    epsilon is exactly k/n.
    """
    weights = _check_weights(weights)
    if len(classes) != len(weights):
        raise invalid("LengthMismatch", "one weight per class")
    if not lat.class_chain_is_simplex(list(classes)):
        raise invalid("NotASimplex", "classes do not form a flag")
    n = classes[0].dim
    reps: Dict[int, Lattice] = {}
    alpha = [Fraction(0)] * n
    for c, w in zip(classes, weights):
        rep = c.rep if c.rep.total == 0 else c.rep.scaled(-1)
        j = int(lat.epsilon(rep) * n)
        reps[j] = rep
        alpha[j] += w
    i, beta = interval_cover(alpha, r)

    def vertex(k: int) -> Lattice:
        return reps[k % n].scaled(-(k // n))

    point: Point = []
    a = alpha[i % n]
    if beta * a:
        point.append((vertex(i), beta * a))
    for j in range(1, n):
        k = i + j
        if alpha[k % n]:
            point.append((vertex(k), alpha[k % n]))
    if (1 - beta) * a:
        point.append((vertex(i + n), (1 - beta) * a))
    return point


def project(point: Point) -> Dict[LatticeClass, Fraction]:
    """Class projection of a point: weights summed per homothety class."""
    out: Dict[LatticeClass, Fraction] = {}
    for v, w in point:
        c = lat.lattice_class(v)
        out[c] = out.get(c, Fraction(0)) + w
    return out
