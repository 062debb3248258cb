"""
Integral simplicial homology.

Chains are oriented by sorted vertex index. Degree 0 is augmented by the
map C_0 -> Z summing coefficients, which makes every group reduced.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from app.core.exceptions import invalid
from app.models.domain import InclusionKind
from app.models.reports import HomologyDegree
from app.services.complex import SimplicialComplex
from app.services.intlinalg import (
    Matrix,
    SmithForm,
    integer_kernel,
    row_echelon_basis,
    in_span,
    smith_form,
    sparse_elementary_divisors,
)

logger = logging.getLogger(__name__)

Column = Dict[int, int]


@dataclass
class ChainComplex:
    """
    sizes[k] = number of k-simplices (sizes[-1] = 1 for the augmentation);
    boundaries[k] = sparse columns of d_k : C_k -> C_{k-1}.
    """
    sizes: Dict[int, int]
    boundaries: Dict[int, List[Column]]

    @property
    def top(self) -> int:
        return max(self.boundaries) if self.boundaries else -1

    def dense(self, k: int) -> Matrix:
        rows = self.sizes.get(k - 1, 0)
        cols = self.boundaries.get(k, [])
        m = [[0] * len(cols) for _ in range(rows)]
        for j, col in enumerate(cols):
            for i, x in col.items():
                m[i][j] = x
        return m

    def array(self, k: int) -> np.ndarray:
        m = np.zeros((self.sizes.get(k - 1, 0), len(self.boundaries.get(k, []))), dtype=np.int64)
        for j, col in enumerate(self.boundaries.get(k, [])):
            for i, x in col.items():
                m[i, j] = x
        return m

    def check(self) -> bool:
        """d_k o d_{k+1} = 0 in every degree."""
        for k in range(0, self.top):
            if np.any(self.array(k) @ self.array(k + 1)):
                return False
        return True


@dataclass
class HomologyResult:
    degrees: List[HomologyDegree]

    def betti(self, k: int) -> int:
        return next((d.betti for d in self.degrees if d.k == k), 0)

    def torsion(self, k: int) -> List[int]:
        return next(([int(t) for t in d.torsion] for d in self.degrees if d.k == k), [])

    def is_trivial(self) -> bool:
        return all(d.betti == 0 and not d.torsion for d in self.degrees)

    def to_json(self) -> List[Dict]:
        return [d.model_dump() for d in self.degrees]


def boundary_matrices(x: SimplicialComplex, augmented: bool = True) -> ChainComplex:
    """
    Sparse simplicial chain complex of X.

    Args:
        x: Closed simplicial complex
        augmented: Add the degree -1 group Z so homology comes out reduced

    Returns:
        ChainComplex with one sparse column per simplex, faces with alternating signs
    """
    sizes: Dict[int, int] = {-1: 1} if augmented else {}
    boundaries: Dict[int, List[Column]] = {}
    position: Dict[int, Dict[Tuple[int, ...], int]] = {}
    for k, ss in x.simplices.items():
        sizes[k] = len(ss)
        position[k] = {s: i for i, s in enumerate(ss)}
    for k, ss in x.simplices.items():
        if k == 0:
            if augmented:
                boundaries[0] = [{0: 1} for _ in ss]
            continue
        cols = []
        for s in ss:
            col = {}
            for j in range(len(s)):
                face = s[:j] + s[j + 1:]
                col[position[k - 1][face]] = -1 if j % 2 else 1
            cols.append(col)
        boundaries[k] = cols
    return ChainComplex(sizes, boundaries)


def smith_normal_form(matrix: Sequence[Sequence[int]], transforms: bool = False) -> SmithForm:
    """Smith normal form of an integer matrix; see intlinalg.smith_form."""
    return smith_form(matrix, transforms)


def _ranks(cc: ChainComplex) -> Dict[int, Tuple[int, List[int]]]:
    out = {}
    for k, cols in cc.boundaries.items():
        out[k] = sparse_elementary_divisors(cols)
    return out


def reduced_homology(x: SimplicialComplex) -> HomologyResult:
    """
    Reduced integral homology in degrees 0..dim X.

    Args:
        x: Nonempty simplicial complex

    Returns:
        HomologyResult with the Betti number and torsion coefficients per degree

    Raises:
        ValidationError: EmptyComplex
    """
    if not x.vertices:
        raise invalid("EmptyComplex", "reduced homology of the empty complex is not modeled")
    cc = boundary_matrices(x)
    ranks = _ranks(cc)
    degrees = []
    for k in range(0, x.dimension + 1):
        rank_k = ranks.get(k, (0, []))[0]
        rank_up, torsion = ranks.get(k + 1, (0, []))
        betti = cc.sizes[k] - rank_k - rank_up
        degrees.append(HomologyDegree(k=k, betti=betti, torsion=[str(t) for t in torsion]))
    logger.debug(f"homology of {len(x.vertices)}-vertex complex: {[(d.k, d.betti) for d in degrees]}")
    return HomologyResult(degrees)


def euler_characteristic(x: SimplicialComplex) -> int:
    """Alternating sum of the f-vector."""
    return sum((-1) ** k * n for k, n in enumerate(x.f_vector()))


# ============================================================================
# Induced maps
# ============================================================================

@dataclass
class InducedMap:
    kind: InclusionKind
    source_rank: int
    image_rank: int

    def to_json(self) -> Dict:
        return {"kind": self.kind.value, "source_rank": self.source_rank, "image_rank": self.image_rank}


def _permutation_sign(values: Sequence[int]) -> int:
    sign = 1
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] > vals[j]:
                sign = -sign
    return sign


def _embedding(sub: SimplicialComplex, sup: SimplicialComplex, k: int) -> List[Tuple[int, int]]:
    """For each k-simplex of sub: (index in sup's k-simplices, orientation sign)."""
    ids = []
    for v in sub.vertices:
        if v not in sup.index:
            raise invalid("NotSubcomplex", f"vertex {v} missing from the larger complex")
        ids.append(sup.index[v])
    position = {s: i for i, s in enumerate(sup.simplices.get(k, []))}
    out = []
    for s in sub.simplices.get(k, []):
        image = [ids[i] for i in s]
        key = tuple(sorted(image))
        if key not in position:
            raise invalid("NotSubcomplex", f"simplex {s} missing from the larger complex")
        out.append((position[key], _permutation_sign(image)))
    return out


def _push(vectors: Sequence[Sequence[int]], embedding: Sequence[Tuple[int, int]], size: int) -> Matrix:
    out = []
    for vec in vectors:
        image = [0] * size
        for x, (pos, sign) in zip(vec, embedding):
            image[pos] += sign * x
        out.append(image)
    return out


def _columns(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)] if m and m[0] else []


def _rank(vectors: Matrix, size: int) -> int:
    return len(row_echelon_basis(vectors, size))


def induced_map_class(sub: SimplicialComplex, sup: SimplicialComplex, k: int) -> InducedMap:
    """
    Classify H~_k(sub) -> H~_k(sup). The map is zero iff Z_k(sub) lies in
    B_k(sup) and injective iff Z_k(sub) ∩ B_k(sup) = B_k(sub). A trivial source
    reports zero.
    """
    if not sub.vertices or not sup.vertices:
        raise invalid("EmptyComplex", "induced maps need nonempty complexes")
    emb = _embedding(sub, sup, k)
    _embedding(sub, sup, k + 1)
    n_sub = len(sub.simplices.get(k, []))
    n_sup = len(sup.simplices.get(k, []))
    cc_sub = boundary_matrices(sub)
    cc_sup = boundary_matrices(sup)

    cycles = integer_kernel(cc_sub.dense(k), n_sub) if n_sub else []
    z = _push(cycles, emb, n_sup)
    b_sup = _columns(cc_sup.dense(k + 1))
    b_sub = _push(_columns(cc_sub.dense(k + 1)), emb, n_sup)

    b_sup_basis = row_echelon_basis(b_sup, n_sup)
    source_rank = len(cycles) - _rank(_columns(cc_sub.dense(k + 1)), n_sub)
    image_rank = _rank(z + b_sup, n_sup) - len(b_sup_basis)

    if all(in_span(vec, b_sup_basis) for vec in z):
        kind = InclusionKind.ZERO
    else:
        # Z ∩ B_sup from integer solutions of Z a = B b
        stacked = [list(row) for row in zip(*(z + [[-x for x in b] for b in b_sup]))]
        solutions = integer_kernel(stacked, len(z) + len(b_sup)) if stacked else []
        meet = [
            [sum(a * zv[i] for a, zv in zip(sol[: len(z)], z)) for i in range(n_sup)]
            for sol in solutions
        ]
        same = row_echelon_basis(meet, n_sup) == row_echelon_basis(b_sub, n_sup)
        kind = InclusionKind.INJECTIVE if same else InclusionKind.NON_INJECTIVE_NONZERO
    logger.debug(f"induced map in degree {k}: {kind.value} (source {source_rank}, image {image_rank})")
    return InducedMap(kind, source_rank, image_rank)
