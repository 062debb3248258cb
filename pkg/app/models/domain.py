"""
Domain models for the combinatorics and geometry layers.

Value types are immutable: pydantic models (frozen) where the value is parsed
from user input, frozen dataclasses on the hot paths of the searches.
Indices are 0-based internally and 1-based in every serialized form.
"""
from dataclasses import dataclass
from enum import Enum as PyEnum
from fractions import Fraction
from math import lcm, gcd
from typing import Iterable, List, Sequence, Tuple
from pydantic import BaseModel, ConfigDict, model_validator
from app.core.exceptions import invalid


# ============================================================================
# Enums
# ============================================================================

class Model(str, PyEnum):
    """Which truncation of the building: lattices or homothety classes."""
    EXTENDED = "extended"
    QUOTIENT = "quotient"


class Engine(str, PyEnum):
    """Minimal essential dimension engines."""
    SEARCH = "search"
    ORACLE = "oracle"


class LatticeOrder(str, PyEnum):
    """Set-theoretic relation of two lattices."""
    EQUAL = "equal"
    SUBSET = "subset"
    SUPERSET = "superset"
    INCOMPARABLE = "incomparable"


class InclusionKind(str, PyEnum):
    """Classification of an inclusion-induced map on reduced homology."""
    ZERO = "zero"
    INJECTIVE = "injective"
    NON_INJECTIVE_NONZERO = "non-injective-nonzero"


# ============================================================================
# Defining data
# ============================================================================

class VectorPair(BaseModel):
    """
    The defining integer vectors (w1, w2) of G_{w1,w2}.

    Matrices are (n+1)x(n+1); both vectors have length n+1.
    Construction checks every condition and names the first one that fails.
    Proportional vectors are rejected (DependentVectors).
    """
    model_config = ConfigDict(frozen=True)

    w1: Tuple[int, ...]
    w2: Tuple[int, ...]

    @model_validator(mode="after")
    def check_conditions(self) -> "VectorPair":
        if len(self.w1) != len(self.w2) or len(self.w1) < 2:
            raise invalid("LengthMismatch", "w1 and w2 need equal length >= 2")
        for name, w in (("w1", self.w1), ("w2", self.w2)):
            if not any(w):
                raise invalid("ZeroVector", f"{name} is the zero vector")
        for name, w in (("w1", self.w1), ("w2", self.w2)):
            if any(a < b for a, b in zip(w, w[1:])):
                raise invalid("NotMonotone", f"entries of {name} must be non-increasing")
        if sum(self.w1) <= 0:
            raise invalid("SumSignViolation", "sum of w1 must be positive")
        if sum(self.w2) > 0:
            raise invalid("SumSignViolation", "sum of w2 must be non-positive")
        k = next(i for i, a in enumerate(self.w1) if a)
        if all(a * self.w2[k] == b * self.w1[k] for a, b in zip(self.w1, self.w2)):
            # then v = 0 and no partition has an essential block
            raise invalid("DependentVectors", "w1 and w2 must be linearly independent")
        return self

    @property
    def n(self) -> int:
        return len(self.w1) - 1

    @property
    def size(self) -> int:
        return len(self.w1)

    def doubled(self) -> "VectorPair":
        return VectorPair(w1=tuple(2 * a for a in self.w1), w2=tuple(2 * a for a in self.w2))


@dataclass(frozen=True)
class DerivedVector:
    """Exact rational vector v = w2 - (sum w2 / sum w1) w1; sums to zero."""
    v: Tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.v)

    def block_sum(self, block: Iterable[int]) -> Fraction:
        return sum((self.v[i] for i in block), Fraction(0))

    def to_json(self) -> List[str]:
        return [str(x) for x in self.v]


# ============================================================================
# Partitions and sign vectors
# ============================================================================

@dataclass(frozen=True)
class Partition:
    """
    Blocks of {0, ..., size-1}, canonical: each block sorted, blocks sorted by
    their minimum. Tuple comparison of `blocks` is the lexicographic order used
    for witness tie-breaks.
    """
    blocks: Tuple[Tuple[int, ...], ...]
    size: int

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], size: int) -> "Partition":
        canon = sorted(tuple(sorted(b)) for b in blocks)
        seen = [i for b in canon for i in b]
        if any(len(b) == 0 for b in canon):
            raise invalid("InvalidPartition", "blocks must be nonempty")
        if sorted(seen) != list(range(size)):
            raise invalid("InvalidPartition", "blocks must disjointly cover the index set")
        return cls(blocks=tuple(canon), size=size)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Blocks are the fibres of the labelling i -> labels[i]."""
        groups: dict = {}
        for i, label in enumerate(labels):
            groups.setdefault(label, []).append(i)
        return cls(blocks=tuple(sorted(tuple(g) for g in groups.values())), size=len(labels))

    @classmethod
    def trivial(cls, size: int) -> "Partition":
        return cls(blocks=(tuple(range(size)),), size=size)

    @classmethod
    def from_json(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        zero_based = [[i - 1 for i in b] for b in blocks]
        size = sum(len(b) for b in zero_based)
        return cls.of(zero_based, size)

    @property
    def labels(self) -> Tuple[int, ...]:
        """Block number of each index."""
        out = [0] * self.size
        for k, block in enumerate(self.blocks):
            for i in block:
                out[i] = k
        return tuple(out)

    def is_trivial(self) -> bool:
        return len(self.blocks) == 1

    def refines(self, other: "Partition") -> bool:
        """Every block of self lies inside a block of other."""
        other_labels = other.labels
        return all(len({other_labels[i] for i in b}) == 1 for b in self.blocks)

    def to_json(self) -> List[List[int]]:
        return [[i + 1 for i in b] for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class SignVector:
    """A +-1 diagonal pattern, i.e. a diagonal involution."""
    entries: Tuple[int, ...]

    def __post_init__(self):
        if any(e not in (1, -1) for e in self.entries):
            raise invalid("InvalidSignVector", "entries must be +1 or -1")

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        """Flag syntax: '+-+-'."""
        if not text or any(c not in "+-" for c in text):
            raise invalid("BadFlag", f"sign vector {text!r} must use only '+' and '-'")
        return cls(tuple(1 if c == "+" else -1 for c in text))

    @classmethod
    def from_mask(cls, mask: int, size: int) -> "SignVector":
        """Bit i set means entry i is -1."""
        return cls(tuple(-1 if (mask >> i) & 1 else 1 for i in range(size)))

    @classmethod
    def identity(cls, size: int) -> "SignVector":
        return cls((1,) * size)

    @property
    def mask(self) -> int:
        return sum(1 << i for i, e in enumerate(self.entries) if e == -1)

    @property
    def minus_set(self) -> Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e == -1)

    def __mul__(self, other: "SignVector") -> "SignVector":
        return SignVector(tuple(a * b for a, b in zip(self.entries, other.entries)))

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "".join("+" if e == 1 else "-" for e in self.entries)


# ============================================================================
# Heights
# ============================================================================

@dataclass(frozen=True)
class HeightFunction:
    """
    Linear height <w, rho(.)> for a dominant integer direction w.

    Dominance: entries non-increasing. With sum(w) != 0 the height only makes
    sense on lattices (extended model); with sum(w) == 0 it descends to classes.
    """
    w: Tuple[int, ...]

    def __post_init__(self):
        if not any(self.w):
            raise invalid("ZeroVector", "height direction must be nonzero")
        if any(a < b for a, b in zip(self.w, self.w[1:])):
            raise invalid("NotMonotone", "height direction must be dominant (non-increasing)")

    @classmethod
    def from_rational(cls, v: Sequence[Fraction]) -> "HeightFunction":
        """Primitive integer multiple of a rational dominant vector."""
        denom = lcm(*(Fraction(x).denominator for x in v))
        ints = [int(Fraction(x) * denom) for x in v]
        g = gcd(*ints) or 1
        return cls(tuple(x // g for x in ints))

    @property
    def descends(self) -> bool:
        return sum(self.w) == 0

    def __len__(self) -> int:
        return len(self.w)
