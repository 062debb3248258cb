"""
Named families of defining vectors with their published values.

abels_pair(n):       Abels's groups, m = 1.
prescribed_pair(n, m0): m = m0, so the Bredon length can be any value below n.
overlap_pair(k):     n = 2k; the literal definitions and the published values
                     disagree on m, so both are reported.
"""
from typing import Dict, Optional
from app.core.exceptions import invalid
from app.models.domain import VectorPair
from app.services.invariants import validate_pair


def abels_pair(n: int) -> VectorPair:
    """Abels' group in B_{n+1}: w1 = e_1, w2 = -e_{n+1}; m = 1."""
    if n < 1:
        raise invalid("BadFlag", "n must be positive")
    return validate_pair([1] + [0] * n, [0] * n + [-1])


def prescribed_pair(n: int, m0: int) -> VectorPair:
    """
    Pair with classical length n - 1 and Bredon length m0 - 1.

    Args:
        n: Matrix size minus one
        m0: Target value of m, 1 <= m0 <= n
    """
    if not 1 <= m0 <= n:
        raise invalid("BadFlag", "need 1 <= m0 <= n")
    w1 = [2] * (n + 1)
    w2 = [1] * m0 + [0] * (n - m0) + [-m0]
    return validate_pair(w1, w2)


def overlap_pair(k: int, doubled: bool = False) -> VectorPair:
    if k < 1:
        raise invalid("BadFlag", "k must be positive")
    n = 2 * k
    w1 = [1] * (k + 1) + [0] * (n - k)
    w2 = [0] * k + [-1] * (n + 1 - k)
    pair = validate_pair(w1, w2)
    return pair.doubled() if doubled else pair


def overlap_pair_stated(k: int) -> Dict:
    """Published values for the overlap family."""
    if k % 2 == 0:
        m = 3 * k // 2
    else:
        m = 3 * (k - 1) // 2 + 2
    return {
        "minimal_admissible_essential_dimension": m,
        "unrestricted_minimal_essential_dimension": k,
        "bredon_length": m,
        "bredon_length_doubled": k,
    }


def identify_overlap_pair(pair: VectorPair) -> Optional[Dict]:
    """(k, doubled) when the pair belongs to the overlap family."""
    if pair.size % 2 == 0:
        return None
    k = pair.n // 2
    for doubled in (False, True):
        candidate = overlap_pair(k, doubled)
        if candidate.w1 == pair.w1 and candidate.w2 == pair.w2:
            return {"k": k, "doubled": doubled}
    return None
