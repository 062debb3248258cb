"""
Finite truncations of the building as simplicial complexes.

Vertices are lattices (extended model) or homothety classes (quotient model);
simplices are flags. Complexes are immutable: vertices keep a fixed order and
simplices are sorted tuples of vertex indices, so every derived artifact
(boundary matrices, JSON, DOT) is deterministic.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from app.core.budget import Budget, unlimited
from app.core.cache import cache_key, get_cache, set_cache
from app.core.config import settings
from app.core.exceptions import cap_exceeded, invalid
from app.models.domain import HeightFunction, Model, Partition, SignVector
from app.services import lattice as lat
from app.services.invariants import partition_from_signs
from app.services.lattice import Lattice, LatticeClass, Vertex
from app.services.padic import PMatrix

logger = logging.getLogger(__name__)

Simplex = Tuple[int, ...]


# ============================================================================
# Simplicial complexes
# ============================================================================

class SimplicialComplex:
    """Face-closed family of vertex-index tuples over an ordered vertex list."""

    def __init__(
        self,
        vertices: Sequence[Hashable],
        simplices: Iterable[Sequence[int]],
        model: Optional[Model] = None,
        closed: bool = False,
    ):
        self.vertices: Tuple[Hashable, ...] = tuple(vertices)
        self.index: Dict[Hashable, int] = {v: i for i, v in enumerate(self.vertices)}
        self.model = model
        faces: Set[Simplex] = {(i,) for i in range(len(self.vertices))}
        for s in simplices:
            s = tuple(sorted(set(s)))
            if closed:
                faces.add(s)
                continue
            for k in range(1, len(s) + 1):
                faces.update(combinations(s, k))
        by_dim: Dict[int, List[Simplex]] = {}
        for s in faces:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self.simplices: Dict[int, List[Simplex]] = {k: sorted(v) for k, v in sorted(by_dim.items())}
        self._members = faces

    @classmethod
    def from_simplices(cls, maximal: Iterable[Sequence[Hashable]], model: Optional[Model] = None) -> "SimplicialComplex":
        """Face closure of the given simplices, vertex order by first appearance."""
        maximal = [tuple(s) for s in maximal]
        order: Dict[Hashable, int] = {}
        for s in maximal:
            for v in s:
                order.setdefault(v, len(order))
        return cls(list(order), [[order[v] for v in s] for s in maximal], model)

    @property
    def dimension(self) -> int:
        return max(self.simplices) if self.simplices else -1

    def f_vector(self) -> List[int]:
        return [len(self.simplices.get(k, [])) for k in range(self.dimension + 1)]

    def __contains__(self, simplex: Sequence[int]) -> bool:
        return tuple(sorted(simplex)) in self._members

    def is_face_closed(self) -> bool:
        return all(
            face in self._members
            for k, ss in self.simplices.items() if k > 0
            for s in ss
            for face in combinations(s, k)
        )

    def induced(self, keep: Iterable[int]) -> "SimplicialComplex":
        """Full subcomplex on the kept vertex indices (original order preserved)."""
        keep = sorted(set(keep))
        new = {old: i for i, old in enumerate(keep)}
        simplices = [
            tuple(new[i] for i in s)
            for ss in self.simplices.values()
            for s in ss
            if all(i in new for i in s)
        ]
        return SimplicialComplex([self.vertices[i] for i in keep], simplices, self.model, closed=True)

    def cone(self, apex: Hashable = "apex") -> "SimplicialComplex":
        """Join with a new apex vertex; the result is contractible."""
        a = len(self.vertices)
        simplices = [s + (a,) for ss in self.simplices.values() for s in ss]
        return SimplicialComplex(list(self.vertices) + [apex], simplices, self.model)

    def to_json(self) -> Dict:
        def vjson(v):
            return v.to_json() if hasattr(v, "to_json") else v

        first = next((v for v in self.vertices if isinstance(v, (Lattice, LatticeClass))), None)
        return {
            "model": self.model.value if self.model else None,
            "p": first.p if first is not None else None,
            "dim": first.dim if first is not None else None,
            "vertices": [vjson(v) for v in self.vertices],
            "simplices": {str(k): [list(s) for s in ss] for k, ss in self.simplices.items() if k > 0},
        }

    def to_dot(self, heights: Optional[Mapping[int, int]] = None) -> str:
        """1-skeleton in Graphviz DOT; `heights` annotates vertex labels."""
        lines = ["graph skeleton {"]
        for i, v in enumerate(self.vertices):
            label = str(v)
            if heights is not None and i in heights:
                label += f" h={heights[i]}"
            lines.append(f'  {i} [label="{label}"];')
        for a, b in self.simplices.get(1, []):
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# ============================================================================
# Balls
# ============================================================================

@dataclass
class Ball:
    center: Vertex
    radius: int
    model: Model
    vertices: List[Vertex]
    distance: Dict[Vertex, int] = field(repr=False)

    def deep(self) -> List[Vertex]:
        """Vertices whose full link lies in the ball."""
        return [v for v in self.vertices if self.distance[v] <= self.radius - 1]


def _vertex_payload(v: Vertex) -> List:
    r = lat.representative(v)
    return [r.shift, [list(row) for row in r.hnf]]


def _vertex_from_payload(payload: List, p: int, dim: int, model: Model) -> Vertex:
    shift, hnf = payload
    r = Lattice(p, dim, int(shift), tuple(tuple(int(x) for x in row) for row in hnf))
    return LatticeClass(r) if model == Model.QUOTIENT else r


def ball(
    center: Vertex,
    radius: int,
    model: Model,
    cap: Optional[int] = None,
    budget: Optional[Budget] = None,
) -> Ball:
    """BFS ball of the given edge radius; sorted by (distance, canonical key)."""
    if radius < 0:
        raise invalid("BadFlag", "radius must be non-negative")
    cap = cap or settings.VERTEX_CAP
    budget = budget or unlimited()
    if model == Model.QUOTIENT and isinstance(center, Lattice):
        center = lat.lattice_class(center)
    if model == Model.EXTENDED and isinstance(center, LatticeClass):
        center = center.rep
    p, dim = center.p, center.dim

    key = None
    if settings.cache_enabled:
        key = cache_key("ball", p, dim, model.value, radius, _vertex_payload(center))
        cached = get_cache(key)
        if cached is not None:
            if len(cached) > cap:
                raise cap_exceeded(len(cached), cap)
            vertices = [_vertex_from_payload(item[1], p, dim, model) for item in cached]
            logger.info(f"ball cache hit: {len(vertices)} vertices")
            return Ball(center, radius, model, vertices, {v: item[0] for v, item in zip(vertices, cached)})

    distance: Dict[Vertex, int] = {center: 0}
    frontier = deque([center])
    while frontier:
        budget.check()
        v = frontier.popleft()
        d = distance[v]
        if d == radius:
            continue
        for u in lat.neighbors(v, model):
            if u not in distance:
                distance[u] = d + 1
                if len(distance) > cap:
                    raise cap_exceeded(len(distance), cap)
                frontier.append(u)
    vertices = sorted(distance, key=lambda v: (distance[v], v.sort_key))
    logger.info(f"ball p={p} dim={dim} {model.value} r={radius}: {len(vertices)} vertices")
    if key is not None:
        set_cache(key, [[distance[v], _vertex_payload(v)] for v in vertices])
    return Ball(center, radius, model, vertices, distance)


def build_complex(vertices: Sequence[Vertex], model: Model, budget: Optional[Budget] = None) -> SimplicialComplex:
    """Clique complex of the neighbor graph restricted to `vertices`."""
    budget = budget or unlimited()
    index = {v: i for i, v in enumerate(vertices)}
    adj: List[Set[int]] = [set() for _ in vertices]
    for i, v in enumerate(vertices):
        for u in lat.neighbors(v, model):
            j = index.get(u)
            if j is not None:
                adj[i].add(j)
                adj[j].add(i)
    layer: List[Simplex] = [(i,) for i in range(len(vertices))]
    simplices: List[Simplex] = list(layer)
    while layer:
        budget.check()
        nxt = []
        for s in layer:
            common = set.intersection(*(adj[i] for i in s))
            nxt.extend(s + (j,) for j in sorted(common) if j > s[-1])
        simplices.extend(nxt)
        layer = nxt
    return SimplicialComplex(vertices, simplices, model, closed=True)


def is_flag(vertices: Sequence[Vertex], model: Model) -> bool:
    """The vertices span a simplex: up to homothety a chain L0 <= ... <= Lk with p*Lk <= L0."""
    if model == Model.QUOTIENT:
        return lat.class_chain_is_simplex([v if isinstance(v, LatticeClass) else lat.lattice_class(v) for v in vertices])
    return lat.chain_is_simplex(list(vertices))


def direct_simplices(vertices: Sequence[Vertex], model: Model) -> Set[Simplex]:
    """Simplices by the flag test alone, grown from pairs that pass it."""
    n = len(vertices)
    layer = [(i,) for i in range(n)]
    out: Set[Simplex] = set(layer)
    while layer:
        nxt = []
        for s in layer:
            for j in range(s[-1] + 1, n):
                t = s + (j,)
                if all(u + (j,) in out for u in combinations(s, len(s) - 1)) and is_flag([vertices[i] for i in t], model):
                    nxt.append(t)
        out.update(nxt)
        layer = nxt
    return out


# ============================================================================
# Vertex predicates
# ============================================================================

class VertexPredicate:
    kind: str = "predicate"

    def check_model(self, model: Optional[Model]) -> None:
        pass

    def __call__(self, vertex: Vertex) -> bool:
        raise NotImplementedError

    def __and__(self, other: "VertexPredicate") -> "Conjunction":
        return Conjunction((self, other))


@dataclass(frozen=True)
class HeightInterval(VertexPredicate):
    h: HeightFunction
    lo: Fraction
    hi: Fraction
    kind = "height-interval"

    def __post_init__(self):
        if Fraction(self.lo) > Fraction(self.hi):
            raise invalid("InvalidInterval", f"empty interval [{self.lo}, {self.hi}]")

    def check_model(self, model: Optional[Model]) -> None:
        if model == Model.QUOTIENT and not self.h.descends:
            raise invalid("ClassModelMismatch", "height with nonzero coordinate sum needs the extended model")

    def __call__(self, vertex: Vertex) -> bool:
        return self.lo <= lat.height(vertex, self.h) <= self.hi


@dataclass(frozen=True)
class FixedBySigns(VertexPredicate):
    signs: Tuple[SignVector, ...]
    kind = "fixed-by-signs"

    def __call__(self, vertex: Vertex) -> bool:
        r = lat.representative(vertex)
        for s in self.signs:
            moved = lat.act(PMatrix.diagonal(s.entries, r.p), r)
            if isinstance(vertex, LatticeClass):
                if lat.lattice_class(moved) != vertex:
                    return False
            elif moved != r:
                return False
        return True


@dataclass(frozen=True)
class Depth(VertexPredicate):
    """Distance from the ball center at most `bound`."""
    ball: Ball
    bound: int
    kind = "depth"

    def __call__(self, vertex: Vertex) -> bool:
        return self.ball.distance.get(vertex, self.bound + 1) <= self.bound

    def __hash__(self) -> int:
        return hash((id(self.ball), self.bound))


@dataclass(frozen=True)
class Conjunction(VertexPredicate):
    parts: Tuple[VertexPredicate, ...]
    kind = "conjunction"

    def check_model(self, model: Optional[Model]) -> None:
        for part in self.parts:
            part.check_model(model)

    def __call__(self, vertex: Vertex) -> bool:
        return all(part(vertex) for part in self.parts)


def full_subcomplex(x: SimplicialComplex, pred: Callable[[Vertex], bool]) -> SimplicialComplex:
    """
    Full subcomplex of X on the vertices satisfying `pred`.

    Raises:
        ValidationError: ClassModelMismatch when a predicate needs the other model
    """
    if isinstance(pred, VertexPredicate):
        pred.check_model(x.model)
    return x.induced(i for i, v in enumerate(x.vertices) if pred(v))


# ============================================================================
# Fixed sets
# ============================================================================

def product_check(
    x: SimplicialComplex,
    signs: Sequence[SignVector],
    partition: Optional[Partition] = None,
    budget: Optional[Budget] = None,
) -> bool:
    """
    The vertices fixed by every sign vector are exactly the lattices that split
    as a direct sum over the blocks (of partition_from_signs(signs) unless a
    partition is given).
    """
    if x.model != Model.EXTENDED:
        raise invalid("ClassModelMismatch", "product check runs on the extended model")
    budget = budget or unlimited()
    if not x.vertices:
        return True
    dim = x.vertices[0].dim
    blocks = partition if partition is not None else partition_from_signs(signs, dim)
    fixed = FixedBySigns(tuple(signs))
    mismatches = 0
    for v in x.vertices:
        budget.check()
        if fixed(v) != lat.splits_over(v, blocks):
            mismatches += 1
            logger.debug(f"product check mismatch at {v}")
    logger.info(f"product check over {len(x.vertices)} vertices: {mismatches} mismatches")
    return mismatches == 0


def fixed_tallies(vertices: Sequence[Lattice], s: SignVector) -> Dict[str, int]:
    """Counts of fixed / split / fixed-but-not-split lattices."""
    fixed = split = witnesses = 0
    for v in vertices:
        a = lat.involution_analysis(s, v)
        fixed += a.fixed
        split += a.splits
        witnesses += a.fixed and not a.splits
    return {"fixed": fixed, "split": split, "fixed_not_split": witnesses, "total": len(vertices)}
