"""
Z_p-lattices in Q_p^d and their vertex-level geometry.

A lattice is stored as (shift a, H): a is the least integer with
p^a * A contained in Z_p^d and H is the upper triangular Hermite form of the
integer lattice p^a * A ∩ Z^d (p-power index, so the diagonal holds powers of
p). Equal lattices have equal (a, H); all arithmetic is integer.

Conventions:
- retraction(A) = (v_p(H_ii) - a)_i, the exponents of any upper triangular basis
- index(A, B) = sum e(B) - sum e(A); epsilon(A) = index(A, L0) / dim
- a homothety class is stored through its representative with
  sum e in [0, dim), i.e. epsilon in (-1, 0]
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from app.core.exceptions import invalid
from app.models.domain import HeightFunction, LatticeOrder, Model, Partition, SignVector, VectorPair
from app.services import finite_field
from app.services.intlinalg import hnf_upper
from app.services.padic import PMatrix, int_valuation, is_p_scalar, valuation

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


# ============================================================================
# Lattice values
# ============================================================================

@dataclass(frozen=True)
class Lattice:
    p: int
    dim: int
    shift: int
    hnf: IntMatrix

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(int_valuation(self.hnf[i][i], self.p) - self.shift for i in range(self.dim))

    @property
    def total(self) -> int:
        """Sum of the retraction exponents (= -index(self, L0))."""
        return sum(self.exponents)

    @property
    def sort_key(self) -> tuple:
        return (self.total, self.exponents, self.hnf)

    def basis(self) -> PMatrix:
        """Upper triangular representative; columns span the lattice."""
        scale = Fraction(1, self.p ** self.shift) if self.shift >= 0 else Fraction(self.p ** -self.shift)
        return PMatrix([[scale * x for x in row] for row in self.hnf], self.p)

    def columns(self) -> List[Tuple[Fraction, ...]]:
        return self.basis().columns

    def scaled(self, k: int) -> "Lattice":
        """p^k * self."""
        return Lattice(self.p, self.dim, self.shift - k, self.hnf)

    def contains_vector(self, x: Sequence[Fraction]) -> bool:
        """Back-substitution against the triangular basis; coefficients must be integral."""
        rhs = [Fraction(v) * Fraction(self.p) ** self.shift for v in x]
        for i in range(self.dim - 1, -1, -1):
            c = rhs[i] / self.hnf[i][i]
            if c.denominator != 1:
                return False
            if c:
                for r in range(i + 1):
                    rhs[r] -= c * self.hnf[r][i]
        return True

    def contains(self, other: "Lattice") -> bool:
        if other.total < self.total:
            return False
        return all(self.contains_vector(col) for col in other.columns())

    def to_json(self) -> Dict:
        return {"p": self.p, "dim": self.dim, "basis": [[str(x) for x in col] for col in self.columns()]}

    def __str__(self) -> str:
        return f"L{list(self.exponents)}:{[list(r) for r in self.hnf]}"


@dataclass(frozen=True)
class LatticeClass:
    """Homothety class, keyed by its representative with epsilon in (-1, 0]."""
    rep: Lattice

    @property
    def p(self) -> int:
        return self.rep.p

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def sort_key(self) -> tuple:
        return self.rep.sort_key

    def to_json(self) -> Dict:
        return self.rep.to_json()

    def __str__(self) -> str:
        return f"[{self.rep}]"


Vertex = Union[Lattice, LatticeClass]


def lattice_class(lattice: Lattice) -> LatticeClass:
    """Homothety class [A] of a lattice."""
    k = lattice.total // lattice.dim
    return LatticeClass(lattice.scaled(-k))


def representative(vertex: Vertex) -> Lattice:
    return vertex.rep if isinstance(vertex, LatticeClass) else vertex


# ============================================================================
# Canonical form
# ============================================================================

def _normalized(p: int, dim: int, shift: int, h: Sequence[Sequence[int]]) -> Lattice:
    """Divide out the largest p-power common to every entry of H."""
    t = min(int_valuation(x, p) for row in h for x in row if x)
    if t:
        q = p ** t
        h = [[x // q for x in row] for row in h]
    return Lattice(p, dim, shift - t, tuple(tuple(row) for row in h))


def _from_integer_columns(
    columns: Sequence[Sequence[int]], p: int, dim: int, shift: int, modulus: Optional[int] = None
) -> Lattice:
    """Lattice p^-shift * span_Zp(columns) for integer columns."""
    h = hnf_upper(columns, dim, modulus)
    if h is None:
        raise invalid("SingularBasis", "generators do not span the whole space")
    det = 1
    for i in range(dim):
        det *= h[i][i]
    k = int_valuation(det, p)
    if det != p ** k:
        # the Z-span has non-p index; over Z_p only the p-part matters
        h = hnf_upper(columns, dim, p ** k)
    return _normalized(p, dim, shift, h)


def lattice_from_generators(generators: Iterable[Sequence], p: int, dim: int) -> Lattice:
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    if any(len(g) != dim for g in gens):
        raise invalid("LengthMismatch", f"generators must have length {dim}")
    for g in gens:
        for x in g:
            if not is_p_scalar(x, p):
                raise invalid("NotPScalar", f"{x} is not in Z[1/{p}]")
    s = max([0] + [-int(valuation(x, p)) for g in gens for x in g if x])
    scale = p ** s
    ints = [[int(x * scale) for x in g] for g in gens]
    return _from_integer_columns(ints, p, dim, s)


def canonicalize(basis: PMatrix) -> Lattice:
    """Lattice spanned by the columns of `basis`."""
    if basis.det() == 0:
        raise invalid("SingularBasis", "basis columns are linearly dependent")
    return lattice_from_generators(basis.columns, basis.p, basis.n)


def standard_lattice(p: int, dim: int) -> Lattice:
    return Lattice(p, dim, 0, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))


def diagonal_lattice(e: Sequence[int], p: int) -> Lattice:
    m = min(e)
    dim = len(e)
    h = tuple(tuple(p ** (e[i] - m) if i == j else 0 for j in range(dim)) for i in range(dim))
    return Lattice(p, dim, -m, h)


def from_json(payload: Dict) -> Lattice:
    p, dim = int(payload["p"]), int(payload["dim"])
    return lattice_from_generators(payload["basis"], p, dim)


# ============================================================================
# Order, action, index
# ============================================================================

def lattice_order(a: Lattice, b: Lattice) -> LatticeOrder:
    """
    Compare two lattices by inclusion.

    Args:
        a: First lattice
        b: Second lattice

    Returns:
        EQUAL, SUBSET (a inside b), SUPERSET or INCOMPARABLE
    """
    if a == b:
        return LatticeOrder.EQUAL
    if b.contains(a):
        return LatticeOrder.SUBSET
    if a.contains(b):
        return LatticeOrder.SUPERSET
    return LatticeOrder.INCOMPARABLE


def act(g: PMatrix, a: Lattice) -> Lattice:
    """g . A: the span of g applied to a basis of A."""
    if g.p != a.p or g.n != a.dim:
        raise invalid("LengthMismatch", "matrix and lattice disagree on p or dimension")
    if g.det() == 0:
        raise invalid("SingularMatrix", "matrix is not invertible")
    return lattice_from_generators([g.apply(col) for col in a.columns()], a.p, a.dim)


def index(a: Lattice, b: Lattice) -> int:
    """log_p [A : A ∩ B] - log_p [B : A ∩ B]; negative when A lies inside B."""
    return b.total - a.total


def epsilon(a: Vertex) -> Fraction:
    """
    Position on the line factor: index(A, L0) / dim.

    Args:
        a: Lattice or lattice class

    Returns:
        -(sum of exponents)/dim; a class gives a value in (-1, 0]
    """
    a = representative(a)
    return Fraction(-a.total, a.dim)


def retraction(a: Vertex) -> Tuple[int, ...]:
    """
    Retraction onto the standard apartment along the upper triangular group.

    Args:
        a: Lattice or lattice class (classes use their representative)

    Returns:
        Diagonal exponents of the upper triangular basis
    """
    return representative(a).exponents


def height(a: Vertex, h: HeightFunction) -> int:
    """
    Height <w, retraction(a)>.

    Args:
        a: Lattice, or a class when the direction has coordinate sum 0
        h: Height direction of matching length

    Raises:
        ValidationError: ClassModelMismatch or LengthMismatch
    """
    if isinstance(a, LatticeClass) and not h.descends:
        raise invalid("ClassModelMismatch", "height with nonzero coordinate sum needs the extended model")
    e = retraction(a)
    if len(e) != len(h):
        raise invalid("LengthMismatch", "height direction and lattice dimension differ")
    return sum(x * y for x, y in zip(h.w, e))


# ============================================================================
# Neighbors and flags
# ============================================================================

@lru_cache(maxsize=None)
def _standard_sublattices(p: int, dim: int, proper: bool) -> Tuple[Tuple[int, Tuple[Tuple[int, ...], ...]], ...]:
    """
    (dim W, columns of the Hermite basis of {x in Z^d : x mod p in W}) for
    every subspace W of F_p^d.
    """
    out = []
    for basis in finite_field.all_subspaces(dim, p, proper=proper):
        gens = [list(v) for v in basis]
        h = hnf_upper(gens, dim, p)
        out.append((len(basis), tuple(tuple(h[i][j] for i in range(dim)) for j in range(dim))))
    return tuple(out)


def _product_columns(h: IntMatrix, cols: Sequence[Sequence[int]]) -> List[List[int]]:
    d = len(h)
    return [[sum(h[i][k] * c[k] for k in range(i, d)) for i in range(d)] for c in cols]


@lru_cache(maxsize=200_000)
def _lattice_neighbors(a: Lattice) -> Tuple[Lattice, ...]:
    p, d = a.p, a.dim
    det = 1
    for i in range(d):
        det *= a.hnf[i][i]
    modulus = det * p
    out = set()
    for k, cols in _standard_sublattices(p, d, False):
        sub = _from_integer_columns(_product_columns(a.hnf, cols), p, d, a.shift, modulus)
        if k < d:
            out.add(sub)
        if k > 0:
            out.add(sub.scaled(-1))
    return tuple(sorted(out, key=lambda x: x.sort_key))


@lru_cache(maxsize=200_000)
def _class_neighbors(c: LatticeClass) -> Tuple[LatticeClass, ...]:
    a = c.rep
    p, d = a.p, a.dim
    det = 1
    for i in range(d):
        det *= a.hnf[i][i]
    out = {
        lattice_class(_from_integer_columns(_product_columns(a.hnf, cols), p, d, a.shift, det * p))
        for _, cols in _standard_sublattices(p, d, True)
    }
    return tuple(sorted(out, key=lambda x: x.sort_key))


def neighbors(a: Vertex, model: Model) -> Tuple[Vertex, ...]:
    """
    Adjacent vertices.

    Extended: every B != A with pA <= B <= A or A <= B <= p^-1 A, including pA
    and p^-1 A. Quotient: the classes of pA < B < A.
    """
    if model == Model.QUOTIENT:
        c = a if isinstance(a, LatticeClass) else lattice_class(a)
        return _class_neighbors(c)
    if isinstance(a, LatticeClass):
        raise invalid("ClassModelMismatch", "extended model vertices are lattices")
    return _lattice_neighbors(a)


def expected_neighbor_count(p: int, dim: int, model: Model) -> int:
    """Neighbors of any vertex: proper subspaces of F_p^dim, plus the two homotheties in the extended model."""
    proper = sum(finite_field.gaussian_binomial(dim, k, p) for k in range(1, dim))
    return proper if model == Model.QUOTIENT else 2 * proper + 2


def chain_is_simplex(chain: Sequence[Lattice]) -> bool:
    """The distinct lattices can be ordered L0 <= ... <= Lk with p*Lk <= L0."""
    items = sorted(set(chain), key=lambda x: -x.total)
    if not items:
        return False
    for small, big in zip(items, items[1:]):
        if not big.contains(small):
            return False
    return items[0].contains(items[-1].scaled(1))


def class_chain_is_simplex(classes: Sequence[LatticeClass]) -> bool:
    """
    Classes form a flag iff representatives can be rescaled into a chain.

    With the first class fixed as L, every other class has exactly one rescaling
    strictly between pL and L by total exponent; the set is a simplex iff these
    rescalings form a chain.
    """
    items = list(dict.fromkeys(classes))
    if len(items) <= 1:
        return bool(items)
    top = items[0].rep
    d = top.dim
    chain = [top]
    for c in items[1:]:
        r = c.rep
        if (top.total - r.total) % d == 0:
            return False
        # unique s with top.total < r.total + d*s < top.total + d
        s = (top.total - r.total) // d + 1
        chain.append(r.scaled(s))
    return chain_is_simplex(chain)


# ============================================================================
# Involutions, blocks, diagonalization
# ============================================================================

@dataclass(frozen=True)
class BlockSummand:
    """A ∩ V_J as a lattice in the coordinates of J (None when J is empty)."""
    block: Tuple[int, ...]
    lattice: Optional[Lattice]

    @property
    def total(self) -> int:
        return self.lattice.total if self.lattice is not None else 0

    def to_json(self) -> Dict:
        return {
            "block": [i + 1 for i in self.block],
            "lattice": self.lattice.to_json() if self.lattice is not None else None,
        }


def block_summand(a: Lattice, block: Sequence[int]) -> BlockSummand:
    """
    Intersection of A with the coordinate subspace V_J.

    Args:
        a: Lattice
        block: 0-based coordinates J

    Returns:
        BlockSummand holding A ∩ V_J in the coordinates of J
    """
    block = tuple(sorted(block))
    if not block:
        return BlockSummand(block, None)
    d, p = a.dim, a.p
    order = list(block) + [i for i in range(d) if i not in block]
    permuted = [[a.hnf[order[i]][j] for i in range(d)] for j in range(d)]
    det = 1
    for i in range(d):
        det *= a.hnf[i][i]
    h = hnf_upper(permuted, d, det)
    k = len(block)
    cols = [[h[i][j] for i in range(k)] for j in range(k)]
    return BlockSummand(block, _from_integer_columns(cols, p, k, a.shift, det))


def splits_over(a: Lattice, partition: Partition) -> bool:
    """A equals the direct sum of its intersections with the block subspaces."""
    return sum(block_summand(a, b).total for b in partition.blocks) == a.total


def is_fixed(s: SignVector, a: Lattice) -> bool:
    """diag(s) . A == A"""
    return act(PMatrix.diagonal(s.entries, a.p), a) == a


@dataclass(frozen=True)
class InvolutionAnalysis:
    fixed: bool
    plus: BlockSummand
    minus: BlockSummand
    splits: bool

    def to_json(self) -> Dict:
        return {
            "fixed": self.fixed,
            "splits": self.splits,
            "plus": self.plus.to_json(),
            "minus": self.minus.to_json(),
        }


def involution_analysis(s: SignVector, a: Lattice) -> InvolutionAnalysis:
    """
    Fixed and split status of A under diag(s).

    Args:
        s: Sign vector of length dim
        a: Lattice

    Returns:
        InvolutionAnalysis with both eigenspace summands
    """
    if len(s) != a.dim:
        raise invalid("LengthMismatch", "sign vector and lattice dimension differ")
    plus = block_summand(a, [i for i, e in enumerate(s.entries) if e == 1])
    minus = block_summand(a, s.minus_set)
    return InvolutionAnalysis(
        fixed=is_fixed(s, a),
        plus=plus,
        minus=minus,
        splits=plus.total + minus.total == a.total,
    )


def diagonalize_involution(g: PMatrix) -> Tuple[PMatrix, SignVector]:
    """
    Unipotent upper triangular u with u^-1 g u = diag(d).

    Column j of u is column j of (id + g)/2 when g_jj = 1, else of (id - g)/2.
    """
    if not g.is_upper_triangular():
        raise invalid("NotTriangular", "involution must be upper triangular")
    ident = PMatrix.identity(g.n, g.p)
    if g @ g != ident:
        raise invalid("NotInvolution", "g^2 is not the identity")
    if g.p == 2:
        raise invalid("EvenPrime", "diagonalization needs 2 to be a unit in Z_p")
    half = Fraction(1, 2)
    plus = (ident + g).rows
    minus = (ident - g).rows
    d = tuple(int(x) for x in g.diag())
    u = PMatrix(
        [[half * (plus[i][j] if d[j] == 1 else minus[i][j]) for j in range(g.n)] for i in range(g.n)],
        g.p,
    )
    return u, SignVector(d)


def diagonalize_commuting(gs: Sequence[PMatrix]) -> Tuple[PMatrix, List[SignVector]]:
    """One unipotent u diagonalizing every member of a commuting family of involutions."""
    if not gs:
        raise invalid("EmptyFamily", "need at least one involution")
    for i, g in enumerate(gs):
        for h in gs[i + 1:]:
            if g @ h != h @ g:
                raise invalid("NotCommuting", "involutions must commute pairwise")
    u = PMatrix.identity(gs[0].n, gs[0].p)
    for g in gs:
        step, _ = diagonalize_involution(u.inverse() @ g @ u)
        u = u @ step
    u_inv = u.inverse()
    signs = [SignVector(tuple(int(x) for x in (u_inv @ g @ u).diag())) for g in gs]
    return u, signs


def borel_reduce(a: Lattice) -> PMatrix:
    """Upper triangular b over Z[1/p] with b . L0 = A."""
    return a.basis()


def in_group(g: PMatrix, pair: VectorPair) -> bool:
    """g upper triangular over Z[1/p] with prod d_i^w1_i = prod d_i^w2_i = 1."""
    if g.n != pair.size or not g.is_upper_triangular():
        return False
    diag = g.diag()
    if any(x == 0 or not is_p_scalar(1 / x, g.p) for x in diag):
        return False
    for w in (pair.w1, pair.w2):
        prod = Fraction(1)
        for x, e in zip(diag, w):
            prod *= x ** e
        if prod != 1:
            return False
    return True


def preserves_hyperplane(t: PMatrix, w: Sequence[int]) -> bool:
    """A diagonal t preserves w-perp in the apartment iff sum w_i v(t_i) = 0."""
    if not t.is_diagonal():
        raise invalid("NotDiagonal", "expected a diagonal matrix")
    return sum(wi * valuation(x, t.p) for wi, x in zip(w, t.diag())) == 0


def lattices_between(lower: int, upper: int, p: int, dim: int) -> Iterator[Lattice]:
    """Every lattice A with p^upper L0 <= A <= p^lower L0 (lower <= upper)."""
    if lower > upper:
        raise invalid("InvalidInterval", "lower exponent exceeds upper")
    n = upper - lower
    bottom = standard_lattice(p, dim).scaled(n)

    def shapes(i: int):
        if i == dim:
            yield []
            return
        for e in range(n + 1):
            for rest in shapes(i + 1):
                yield [e] + rest

    for exps in shapes(0):
        slots = [(i, j) for j in range(dim) for i in range(j)]
        ranges = [range(p ** exps[i]) for i, _ in slots]

        def fill(k: int, h: List[List[int]]):
            if k == len(slots):
                yield h
                return
            i, j = slots[k]
            for x in ranges[k]:
                h[i][j] = x
                yield from fill(k + 1, h)
            h[i][j] = 0

        base = [[p ** exps[i] if i == j else 0 for j in range(dim)] for i in range(dim)]
        for h in fill(0, base):
            lat = _normalized(p, dim, 0, [row[:] for row in h])
            if lat.contains(bottom):
                yield lat.scaled(lower)
