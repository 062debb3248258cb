"""
Partition combinatorics of a defining vector pair.

Sign vectors are handled as bitmasks (bit i set <=> entry i is -1); the
diagonal involutions lying in the group form the F_2-space
E = {x : sum x_i w1_i = sum x_i w2_i = 0 mod 2}.

Admissible partitions are exactly partition_from_signs(H) for subgroups H of
E, and P is admissible iff the subgroup E_P of members constant on the blocks
of P already separates the blocks of P.
"""
import logging
from collections import deque
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from app.core.budget import Budget, unlimited
from app.core.exceptions import invalid
from app.models.domain import DerivedVector, Engine, Partition, SignVector, VectorPair
from app.models.reports import FinitenessLengths
from app.services import finite_field

logger = logging.getLogger(__name__)

Labels = Tuple[int, ...]


# ============================================================================
# Defining data
# ============================================================================

def validate_pair(w1: Sequence[int], w2: Sequence[int]) -> VectorPair:
    """
    Build a VectorPair, naming the first failed condition.

    Args:
        w1: Non-increasing integers with positive sum
        w2: Non-increasing integers with non-positive sum, not proportional to w1

    Returns:
        Validated VectorPair

    Raises:
        ValidationError: LengthMismatch, ZeroVector, NotMonotone, SumSignViolation or DependentVectors
    """
    if len(w1) != len(w2) or len(w1) < 2:
        raise invalid("LengthMismatch", "w1 and w2 need equal length >= 2")
    return VectorPair(w1=tuple(int(x) for x in w1), w2=tuple(int(x) for x in w2))


def derived_vector(pair: VectorPair) -> DerivedVector:
    """
    v = w2 - (sum(w2)/sum(w1)) w1, computed exactly.

    The entries of v sum to zero and v is nonzero for every valid pair.
    """
    ratio = Fraction(sum(pair.w2), sum(pair.w1))
    return DerivedVector(tuple(Fraction(b) - ratio * a for a, b in zip(pair.w1, pair.w2)))


# ============================================================================
# Sign vectors
# ============================================================================

def _parity_rows(pair: VectorPair) -> List[List[int]]:
    return [[x % 2 for x in pair.w1], [x % 2 for x in pair.w2]]


def _mask(bits: Sequence[int]) -> int:
    return sum(1 << i for i, b in enumerate(bits) if b)


def involution_in_group(signs: SignVector, pair: VectorPair) -> bool:
    """diag(signs) lies in the group: both products of d_i^w_i equal 1."""
    minus = signs.minus_set
    return sum(pair.w1[i] for i in minus) % 2 == 0 and sum(pair.w2[i] for i in minus) % 2 == 0


def sign_group_basis(pair: VectorPair) -> List[SignVector]:
    """F_2 basis of the diagonal sign matrices lying in the group."""
    basis = finite_field.kernel(_parity_rows(pair), pair.size, 2)
    return [SignVector.from_mask(_mask(b), pair.size) for b in basis]


def _sign_group_masks(pair: VectorPair) -> List[int]:
    basis = [_mask(b) for b in finite_field.kernel(_parity_rows(pair), pair.size, 2)]
    group = {0}
    for b in basis:
        group |= {g ^ b for g in group}
    return sorted(group)


def sign_group(pair: VectorPair) -> List[SignVector]:
    """E, sorted by bitmask; the all-plus vector comes first."""
    return [SignVector.from_mask(m, pair.size) for m in _sign_group_masks(pair)]


# ============================================================================
# Partitions
# ============================================================================

def _canonical(labels: Sequence) -> Labels:
    """Relabel blocks 0, 1, ... in order of first appearance."""
    seen: Dict = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def _refine(labels: Labels, mask: int) -> Labels:
    return _canonical([(lab, (mask >> i) & 1) for i, lab in enumerate(labels)])


def _blocks(labels: Labels) -> List[List[int]]:
    out: List[List[int]] = [[] for _ in range(max(labels) + 1)]
    for i, lab in enumerate(labels):
        out[lab].append(i)
    return out


def _to_partition(labels: Labels) -> Partition:
    return Partition.from_labels(labels)


def partition_from_signs(signs: Iterable[SignVector], size: Optional[int] = None) -> Partition:
    """Classes of i ~ j iff every sign vector agrees on i and j."""
    signs = list(signs)
    if size is None:
        if not signs:
            raise invalid("LengthMismatch", "size is required for an empty sign set")
        size = len(signs[0])
    if any(len(s) != size for s in signs):
        raise invalid("LengthMismatch", "sign vectors must share one length")
    return Partition.from_labels([tuple(s.entries[i] for s in signs) for i in range(size)])


def common_refinement(partitions: Sequence[Partition]) -> Partition:
    """Coarsest partition refining every member of `partitions`."""
    if not partitions:
        raise invalid("EmptyFamily", "need at least one partition")
    size = partitions[0].size
    if any(q.size != size for q in partitions):
        raise invalid("LengthMismatch", "partitions must share one index set")
    labels = [q.labels for q in partitions]
    return Partition.from_labels([tuple(lab[i] for lab in labels) for i in range(size)])


def is_elementary_admissible(partition: Partition, pair: VectorPair) -> bool:
    """Trivial, or a bipartition with a block of even w1- and w2-sum (either block)."""
    if len(partition) >= 3:
        raise invalid("WrongBlockCount", "elementary admissible partitions have at most 2 blocks")
    if partition.is_trivial():
        return True
    return any(
        sum(pair.w1[i] for i in b) % 2 == 0 and sum(pair.w2[i] for i in b) % 2 == 0
        for b in partition.blocks
    )


def _block_constant_basis(labels: Labels, pair: VectorPair) -> List[int]:
    """F_2 basis (as masks) of E_P: members of E constant on every block."""
    blocks = _blocks(labels)
    rows = [
        [sum(pair.w1[i] for i in b) % 2 for b in blocks],
        [sum(pair.w2[i] for i in b) % 2 for b in blocks],
    ]
    basis = []
    for t in finite_field.kernel(rows, len(blocks), 2):
        basis.append(sum(1 << i for k, b in enumerate(blocks) if t[k] for i in b))
    return basis


def _is_admissible_labels(labels: Labels, pair: VectorPair) -> bool:
    separated: Labels = tuple(0 for _ in labels)
    for m in _block_constant_basis(labels, pair):
        separated = _refine(separated, m)
    return separated == labels


def is_admissible(partition: Partition, pair: VectorPair) -> bool:
    """
    Check whether a partition is a common refinement of elementary admissible ones.

    Args:
        partition: Partition of the pair's index set
        pair: Defining vectors

    Returns:
        True if the sign vectors constant on its blocks separate exactly its blocks
    """
    if partition.size != pair.size:
        raise invalid("LengthMismatch", "partition and pair index sets differ")
    return _is_admissible_labels(_canonical(partition.labels), pair)


def is_partition_of(partition: Partition, v: DerivedVector) -> bool:
    """Every block of `partition` has v-sum zero."""
    if partition.size != len(v):
        raise invalid("LengthMismatch", "partition and vector lengths differ")
    return all(v.block_sum(b) == 0 for b in partition.blocks)


def essential_blocks(partition: Partition, v: DerivedVector) -> List[Tuple[int, ...]]:
    return [b for b in partition.blocks if any(v.v[i] != 0 for i in b)]


def essential_dimension(partition: Partition, v: DerivedVector) -> int:
    """
    Sum over essential blocks of (block size - 1).

    Args:
        partition: A partition of v
        v: Derived vector

    Raises:
        ValidationError: NotPartitionOfV when some block has nonzero sum
    """
    if not is_partition_of(partition, v):
        raise invalid("NotPartitionOfV", "some block has nonzero sum")
    return sum(len(b) - 1 for b in essential_blocks(partition, v))


def fixed_set_factors(partition: Partition, pair: VectorPair) -> Dict:
    """
    Product decomposition of the fixed set of the subgroup belonging to
    `partition`: one building of dimension |J| - 1 and one line per block.
    The horosphere part is (ed - 2)-connected when the partition is a
    partition of v and contractible otherwise.
    """
    v = derived_vector(pair)
    essential = set(essential_blocks(partition, v))
    factors = [
        {
            "block": [i + 1 for i in b],
            "building_dimension": len(b) - 1,
            "essential": b in essential,
            "line_factor": True,
        }
        for b in partition.blocks
    ]
    if is_partition_of(partition, v):
        connectivity = essential_dimension(partition, v) - 2
    else:
        connectivity = "contractible"
    return {"factors": factors, "horosphere_connectivity": connectivity}


# ============================================================================
# Engines
# ============================================================================

def _zero_sum(labels: Labels, v: DerivedVector) -> bool:
    sums: Dict[int, Fraction] = {}
    for i, lab in enumerate(labels):
        sums[lab] = sums.get(lab, Fraction(0)) + v.v[i]
    return not any(sums.values())


def _ed(labels: Labels, v: DerivedVector) -> int:
    return sum(len(b) - 1 for b in _blocks(labels) if any(v.v[i] for i in b))


def _search_closure(pair: VectorPair, v: Optional[DerivedVector], budget: Budget) -> Set[Labels]:
    """
    BFS over partitions reachable from {I} by refining with members of E.
    With `v` given, branches that stop being partitions of v are cut: a block
    with nonzero sum keeps a nonzero-sum piece under every refinement.
    """
    masks = [m for m in _sign_group_masks(pair) if m]
    start: Labels = tuple(0 for _ in range(pair.size))
    seen = {start}
    pruned: Set[Labels] = set()
    queue = deque([start])
    while queue:
        budget.check()
        node = queue.popleft()
        for m in masks:
            child = _refine(node, m)
            if child in seen or child in pruned:
                continue
            if v is not None and not _zero_sum(child, v):
                pruned.add(child)
                continue
            seen.add(child)
            queue.append(child)
        logger.debug(f"search node {node}: {len(queue)} queued")
    return seen


def _oracle_closure(pair: VectorPair, budget: Budget) -> Set[Labels]:
    """One partition per subgroup of E; subgroups come from RREF bases of F_2^dim E."""
    basis = [_mask(b) for b in finite_field.kernel(_parity_rows(pair), pair.size, 2)]
    found: Set[Labels] = set()
    for sub in finite_field.all_subspaces(len(basis), 2):
        budget.check()
        labels: Labels = tuple(0 for _ in range(pair.size))
        for coeffs in sub:
            m = 0
            for c, b in zip(coeffs, basis):
                if c:
                    m ^= b
            labels = _refine(labels, m)
        found.add(labels)
    return found


def admissible_partitions(pair: VectorPair, engine: Engine = Engine.SEARCH, budget: Optional[Budget] = None) -> List[Partition]:
    """
    All admissible partitions of the index set, sorted by block list.

    Args:
        pair: Defining vectors
        engine: SEARCH refines the trivial partition by members of the sign group,
            ORACLE takes one partition per subgroup of the sign group
        budget: Wall-clock budget, unlimited by default

    Raises:
        ResourceError: TimeLimitExceeded
    """
    budget = budget or unlimited()
    closure = _search_closure(pair, None, budget) if engine == Engine.SEARCH else _oracle_closure(pair, budget)
    return sorted((_to_partition(x) for x in closure), key=lambda q: q.blocks)


def minimal_essential_dimension(
    pair: VectorPair, engine: Engine = Engine.SEARCH, budget: Optional[Budget] = None
) -> Tuple[int, Partition]:
    """
    m and a witness: the least essential dimension over admissible partitions
    of v; ties go to the lexicographically smallest block list.
    """
    budget = budget or unlimited()
    v = derived_vector(pair)
    if engine == Engine.SEARCH:
        candidates = _search_closure(pair, v, budget)
    else:
        candidates = {x for x in _oracle_closure(pair, budget) if _zero_sum(x, v)}
    best = min(((_ed(x, v), _to_partition(x).blocks) for x in candidates))
    m, blocks = best
    witness = Partition(blocks=blocks, size=pair.size)
    logger.info(f"m={m} for w1={list(pair.w1)} w2={list(pair.w2)} ({engine.value}, {len(candidates)} candidates)")
    return m, witness


def finiteness_lengths(pair: VectorPair, engine: Engine = Engine.SEARCH, budget: Optional[Budget] = None) -> FinitenessLengths:
    """
    Classical and Bredon finiteness lengths.

    Returns:
        FinitenessLengths with classical = n - 1 and bredon = m - 1
    """
    m, _ = minimal_essential_dimension(pair, engine, budget)
    return FinitenessLengths(classical=pair.n - 1, bredon=m - 1)
