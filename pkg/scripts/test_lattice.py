"""
Lattice model tests: canonical forms, action, index, neighbors, involutions.

Usage:
    pytest scripts/test_lattice.py
"""
import random
from fractions import Fraction

import pytest

from app.core.exceptions import ValidationError
from app.models.domain import HeightFunction, LatticeOrder, Model, Partition, SignVector
from app.properties.generators import random_involution, random_lattice, random_matrix, random_unimodular, random_unipotent
from app.services import lattice as lat
from app.services.complex import ball
from app.services.invariants import validate_pair
from app.services.padic import PMatrix, valuation


def L0(p=2, dim=2):
    return lat.standard_lattice(p, dim)


def span(p, *columns):
    return lat.canonicalize(PMatrix.from_columns(columns, p))


# ============================================================================
# Valuations and canonical form
# ============================================================================

def test_valuation():
    assert valuation(12, 3) == 1
    assert valuation(Fraction(5, 9), 3) == -2
    assert valuation(0, 5) == float("inf")


def test_canonicalize_half_column():
    a = span(2, (1, 0), (Fraction(1, 2), 1))
    assert a.basis() == PMatrix([[1, Fraction(1, 2)], [0, 1]], 2)
    assert a != L0()


def test_canonicalize_reduces_over_local_ring():
    assert span(2, (2, 0), (1, 1)).basis() == PMatrix([[2, 1], [0, 1]], 2)


def test_canonicalize_singular():
    with pytest.raises(ValidationError) as exc:
        span(2, (1, 0), (2, 0))
    assert exc.value.condition == "SingularBasis"


def test_canonicalize_ignores_units():
    # 5 is a unit in Z_2, so 5 Z_2 = Z_2
    assert span(2, (5, 0), (0, 1)) == L0()
    assert span(3, (1, 1), (0, 1)) == L0(3)


def test_canonical_form_basis_independent():
    rng = random.Random(11)
    for _ in range(500):
        a = random_lattice(rng, rng.choice((2, 3, 5)), rng.choice((2, 3, 4)))
        u = random_unimodular(rng, a.p, a.dim)
        assert lat.canonicalize(a.basis() @ u) == a


def test_diagonal_lattice():
    assert lat.diagonal_lattice((0, 0), 3) == L0(3)
    assert lat.diagonal_lattice((0, 1), 3) == span(3, (1, 0), (0, 3))
    assert lat.diagonal_lattice((-1, 0), 3) == span(3, (Fraction(1, 3), 0), (0, 1))


def test_json_round_trip():
    rng = random.Random(5)
    for _ in range(10):
        a = random_lattice(rng, 3, 3)
        assert lat.from_json(a.to_json()) == a


# ============================================================================
# Order, action, index, epsilon
# ============================================================================

def test_lattice_order():
    assert lat.lattice_order(L0(), L0().scaled(1)) == LatticeOrder.SUPERSET
    assert lat.lattice_order(L0().scaled(1), L0()) == LatticeOrder.SUBSET
    assert lat.lattice_order(lat.diagonal_lattice((0, 1), 2), lat.diagonal_lattice((1, 0), 2)) == LatticeOrder.INCOMPARABLE
    assert lat.lattice_order(L0(), span(2, (1, 1), (0, 1))) == LatticeOrder.EQUAL


def test_act():
    p = 3
    assert lat.act(PMatrix.diagonal([p, p], p), L0(p)) == L0(p).scaled(1)
    assert lat.act(PMatrix([[1, 7], [0, 1]], p), L0(p)) == L0(p)
    assert lat.act(PMatrix.diagonal([1, Fraction(1, 2)], 2), L0()) == lat.diagonal_lattice((0, -1), 2)


def test_act_singular():
    with pytest.raises(ValidationError):
        lat.act(PMatrix([[1, 1], [1, 1]], 2), L0())


def test_index():
    assert lat.index(L0().scaled(1), L0()) == -2
    assert lat.index(L0(), L0()) == 0
    assert lat.index(lat.diagonal_lattice((0, 1), 2), L0()) == -1


def test_index_additive():
    rng = random.Random(3)
    for _ in range(30):
        a, b, c = (random_lattice(rng, 3, 2) for _ in range(3))
        assert lat.index(a, b) + lat.index(b, c) == lat.index(a, c)


def test_epsilon():
    assert lat.epsilon(L0()) == 0
    assert lat.epsilon(L0().scaled(1)) == -1
    assert lat.epsilon(lat.act(PMatrix.diagonal([1, 2], 2), L0())) == Fraction(-1, 2)


def test_epsilon_equivariance():
    rng = random.Random(7)
    for _ in range(1000):
        p = rng.choice((2, 3, 5))
        dim = rng.choice((2, 3))
        g = random_matrix(rng, p, dim)
        a = random_lattice(rng, p, dim)
        assert lat.epsilon(lat.act(g, a)) == lat.epsilon(a) - Fraction(valuation(g.det(), p), dim)


def test_lattice_class_representative():
    c = lat.lattice_class(L0(3, 3).scaled(-4))
    assert c == lat.lattice_class(L0(3, 3))
    assert -1 < lat.epsilon(c) <= 0


# ============================================================================
# Retraction and heights
# ============================================================================

def test_retraction():
    assert lat.retraction(L0(3, 3)) == (0, 0, 0)
    assert lat.retraction(lat.diagonal_lattice((2, -1, 0), 3)) == (2, -1, 0)
    assert lat.retraction(span(2, (1, 0), (Fraction(1, 2), 1))) == (0, 0)


def test_height():
    assert lat.height(L0(2, 3), HeightFunction((1, 0, -1))) == 0
    assert lat.height(lat.diagonal_lattice((0, 1), 2), HeightFunction((1, -1))) == -1
    h = HeightFunction((1, -1))
    assert lat.height(L0().scaled(1), h) == lat.height(L0(), h)


def test_height_needs_extended_model_for_nonzero_sum():
    with pytest.raises(ValidationError) as exc:
        lat.height(lat.lattice_class(L0()), HeightFunction((1, 0)))
    assert exc.value.condition == "ClassModelMismatch"


def test_height_function_validation():
    with pytest.raises(ValidationError):
        HeightFunction((0, 1))
    with pytest.raises(ValidationError):
        HeightFunction((0, 0))
    assert HeightFunction.from_rational([Fraction(1, 2), Fraction(-1, 2)]).w == (1, -1)


# ============================================================================
# Neighbors and flags
# ============================================================================

@pytest.mark.parametrize(
    "p, dim, model, expected",
    [
        (3, 2, Model.QUOTIENT, 4),
        (2, 3, Model.QUOTIENT, 14),
        (2, 2, Model.EXTENDED, 8),
    ],
)
def test_neighbor_examples(p, dim, model, expected):
    assert len(lat.neighbors(L0(p, dim), model)) == expected


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("model", list(Model))
def test_neighbor_counts_match_gaussian_binomials(p, dim, model):
    found = lat.neighbors(L0(p, dim), model)
    assert len(found) == lat.expected_neighbor_count(p, dim, model)
    assert len(set(found)) == len(found)


def test_neighbors_are_flags():
    for v in lat.neighbors(L0(3, 2), Model.EXTENDED):
        assert lat.chain_is_simplex([L0(3, 2), v])


def test_chain_is_simplex():
    assert lat.chain_is_simplex([L0(), lat.diagonal_lattice((0, 1), 2)])
    assert lat.chain_is_simplex([L0(), L0().scaled(1)])
    assert not lat.chain_is_simplex([L0(), lat.diagonal_lattice((0, 2), 2)])


def test_class_chain_is_simplex():
    c0 = lat.lattice_class(L0(2, 3))
    c1 = lat.lattice_class(lat.diagonal_lattice((0, 0, 1), 2))
    c2 = lat.lattice_class(lat.diagonal_lattice((0, 1, 1), 2))
    assert lat.class_chain_is_simplex([c0, c1, c2])
    far = lat.lattice_class(lat.diagonal_lattice((0, 0, 2), 2))
    assert not lat.class_chain_is_simplex([c0, far])


# ============================================================================
# Involutions and block splittings
# ============================================================================

def test_involution_diagonal_lattice_splits():
    r = lat.involution_analysis(SignVector.parse("+-"), lat.diagonal_lattice((1, -2), 3))
    assert r.fixed and r.splits


def test_involution_not_fixed():
    r = lat.involution_analysis(SignVector.parse("+-"), span(3, (1, 1), (0, 3)))
    assert not r.fixed


def test_involution_fixed_not_split_at_two():
    r = lat.involution_analysis(SignVector.parse("+-"), span(2, (1, 1), (0, 2)))
    assert r.fixed
    assert not r.splits


def test_splits_over_partition():
    a = lat.diagonal_lattice((0, 1, 2), 3)
    assert lat.splits_over(a, Partition.of([[0], [1, 2]], 3))
    b = span(3, (1, 1, 0), (0, 3, 0), (0, 0, 1))
    assert lat.splits_over(b, Partition.of([[0, 1], [2]], 3))
    assert not lat.splits_over(b, Partition.of([[0], [1, 2]], 3))


def test_involution_theorem_odd_prime_exhaustive():
    s = SignVector.parse("+-")
    count = 0
    for a in lat.lattices_between(-2, 2, 3, 2):
        r = lat.involution_analysis(s, a)
        assert r.fixed == r.splits, a
        count += 1
    assert count > 0


def test_involution_theorem_fails_at_two():
    s = SignVector.parse("+-")
    witnesses = [a for a in lat.lattices_between(-2, 2, 2, 2) if lat.involution_analysis(s, a).fixed and not lat.involution_analysis(s, a).splits]
    assert witnesses


def test_lattices_between_bounds():
    found = list(lat.lattices_between(0, 1, 2, 2))
    # L0, 2 L0 and the three lattices strictly between them
    assert len(found) == 5
    assert all(L0().contains(a) and a.contains(L0().scaled(1)) for a in found)
    with pytest.raises(ValidationError):
        list(lat.lattices_between(1, 0, 2, 2))


def test_diagonalize_involution_examples():
    u, d = lat.diagonalize_involution(PMatrix.diagonal([1, -1], 3))
    assert u == PMatrix.identity(2, 3)
    assert str(d) == "+-"
    u, d = lat.diagonalize_involution(PMatrix([[1, 2], [0, -1]], 3))
    assert u == PMatrix([[1, -1], [0, 1]], 3)
    assert str(d) == "+-"


@pytest.mark.parametrize(
    "g, p, condition",
    [
        ([[1, 1], [0, 1]], 3, "NotInvolution"),
        ([[1, 0], [1, -1]], 3, "NotTriangular"),
        ([[1, 0], [0, -1]], 2, "EvenPrime"),
    ],
)
def test_diagonalize_involution_rejects(g, p, condition):
    with pytest.raises(ValidationError) as exc:
        lat.diagonalize_involution(PMatrix(g, p))
    assert exc.value.condition == condition


def test_diagonalize_involution_round_trip():
    rng = random.Random(13)
    for _ in range(500):
        g = random_involution(rng, 3, rng.choice((2, 3, 4)))
        u, d = lat.diagonalize_involution(g)
        assert u.is_unipotent_upper()
        assert u.inverse() @ g @ u == PMatrix.diagonal(d.entries, 3)


def test_diagonalize_commuting():
    rng = random.Random(17)
    u = random_unipotent(rng, 3, 3)
    g1 = u @ PMatrix.diagonal([1, -1, 1], 3) @ u.inverse()
    g2 = u @ PMatrix.diagonal([-1, -1, 1], 3) @ u.inverse()
    v, signs = lat.diagonalize_commuting([g1, g2])
    assert [str(s) for s in signs] == ["+-+", "--+"]
    for g, s in zip((g1, g2), signs):
        assert v.inverse() @ g @ v == PMatrix.diagonal(s.entries, 3)


def test_diagonalize_commuting_rejects():
    with pytest.raises(ValidationError) as exc:
        lat.diagonalize_commuting([PMatrix([[1, 2], [0, -1]], 3), PMatrix.diagonal([1, -1], 3)])
    assert exc.value.condition == "NotCommuting"


# ============================================================================
# Borel reduction and the group
# ============================================================================

def test_borel_reduce_examples():
    assert lat.borel_reduce(L0(3, 2)) == PMatrix.identity(2, 3)
    assert lat.borel_reduce(lat.diagonal_lattice((1, -1, 0), 2)) == PMatrix.diagonal([2, Fraction(1, 2), 1], 2)
    assert lat.borel_reduce(span(2, (1, 0), (Fraction(1, 2), 1))) == PMatrix([[1, Fraction(1, 2)], [0, 1]], 2)


@pytest.mark.slow
def test_borel_reduce_radius_two_ball():
    for a in ball(L0(2, 3), 2, Model.EXTENDED).vertices:
        b = lat.borel_reduce(a)
        assert b.is_upper_triangular()
        assert lat.act(b, L0(2, 3)) == a


def test_in_group():
    pair = validate_pair([1, 0, 0], [0, 0, -1])
    assert lat.in_group(PMatrix([[1, 5, 1], [0, 2, 3], [0, 0, 1]], 2), pair)
    assert not lat.in_group(PMatrix.diagonal([2, 1, 1], 2), pair)
    assert not lat.in_group(PMatrix([[1, 0, 0], [1, 1, 0], [0, 0, 1]], 2), pair)


def test_preserves_hyperplane():
    assert lat.preserves_hyperplane(PMatrix.diagonal([2, 2], 2), (1, -1))
    assert not lat.preserves_hyperplane(PMatrix.diagonal([2, 1], 2), (1, -1))
