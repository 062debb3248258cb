"""
Integral homology tests, including the horosphere annuli of the SL2(Q2) tree
and the rank-2 slice, checked against independent connectivity walks.

Usage:
    pytest scripts/test_homology.py
"""
import random
from fractions import Fraction
from typing import Dict, List

import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.domains import ZZ

from app.core.exceptions import ValidationError
from app.models.domain import HeightFunction, InclusionKind, Model
from app.properties.homology_suite import fixtures
from app.services import lattice as lat
from app.services.complex import Depth, HeightInterval, SimplicialComplex, ball, build_complex, full_subcomplex
from app.services.homology import (
    boundary_matrices,
    euler_characteristic,
    induced_map_class,
    reduced_homology,
    smith_normal_form,
)
from app.services.intlinalg import matmul


def components(vertices, model) -> List[set]:
    """Connected components by walking lat.neighbors inside the vertex set."""
    remaining = set(vertices)
    out = []
    while remaining:
        start = remaining.pop()
        comp, stack = {start}, [start]
        while stack:
            v = stack.pop()
            for u in lat.neighbors(v, model):
                if u in remaining:
                    remaining.discard(u)
                    comp.add(u)
                    stack.append(u)
        out.append(comp)
    return out


@pytest.fixture(scope="module")
def tree_ball():
    b = ball(lat.standard_lattice(2, 2), 6, Model.QUOTIENT)
    return b, build_complex(b.vertices, Model.QUOTIENT)


def annulus(b, x, lo, hi):
    pred = HeightInterval(HeightFunction((1, -1)), Fraction(lo), Fraction(hi)) & Depth(b, b.radius - 1)
    return full_subcomplex(x, pred)


# ============================================================================
# Chain complexes
# ============================================================================

def test_hollow_triangle_boundary():
    x = SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2)])
    cc = boundary_matrices(x)
    d1 = np.array(cc.dense(1))
    assert d1.shape == (3, 3)
    assert not d1.sum(axis=0).any()
    assert 2 not in cc.boundaries


def test_filled_triangle_boundary():
    cc = boundary_matrices(SimplicialComplex.from_simplices([(0, 1, 2)]))
    assert cc.array(2).shape == (3, 1)


def test_boundary_squares_to_zero_on_balls():
    for p, dim, model in ((2, 3, Model.QUOTIENT), (3, 2, Model.EXTENDED), (2, 3, Model.EXTENDED)):
        b = ball(lat.standard_lattice(p, dim), 1, model)
        assert boundary_matrices(build_complex(b.vertices, model)).check()


# ============================================================================
# Smith normal form
# ============================================================================

def test_smith_examples():
    assert smith_normal_form([[2, 4], [6, 8]]).divisors == [2, 4]
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).divisors == [1, 1, 1]
    zero = smith_normal_form([[0, 0], [0, 0]])
    assert zero.rank == 0 and zero.divisors == []


def test_smith_transforms():
    m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    snf = smith_normal_form(m, transforms=True)
    assert snf.divisors == [2, 6, 12]
    assert matmul(matmul(snf.u, m), snf.v) == snf.d


def test_smith_matches_sympy():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(1, 4)
        m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        ours = smith_normal_form(m).divisors
        theirs = sympy_snf(sympy.Matrix(m), domain=ZZ)
        expected = [abs(int(theirs[i, i])) for i in range(n) if theirs[i, i] != 0]
        assert ours == expected, m


# ============================================================================
# Reduced homology
# ============================================================================

def test_two_points():
    h = reduced_homology(SimplicialComplex.from_simplices([(0,), (1,)]))
    assert h.betti(0) == 1


def test_hollow_triangle():
    h = reduced_homology(SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2)]))
    assert (h.betti(0), h.betti(1)) == (0, 1)


@pytest.mark.parametrize("name", ["S0", "S1", "S2", "RP2"])
def test_standard_fixtures(name):
    x, expected = fixtures()[name]
    h = reduced_homology(x)
    for k, (betti, torsion) in expected.items():
        assert h.betti(k) == betti
        assert h.torsion(k) == torsion
    assert reduced_homology(x.cone()).is_trivial()


def test_projective_plane_torsion():
    x, _ = fixtures()["RP2"]
    h = reduced_homology(x)
    assert h.torsion(1) == [2]
    assert h.betti(2) == 0
    assert euler_characteristic(x) == 1


def test_empty_complex_rejected():
    with pytest.raises(ValidationError) as exc:
        reduced_homology(SimplicialComplex([], []))
    assert exc.value.condition == "EmptyComplex"


def test_euler_matches_betti_numbers():
    b = ball(lat.standard_lattice(2, 3), 1, Model.QUOTIENT)
    x = build_complex(b.vertices, Model.QUOTIENT)
    h = reduced_homology(x)
    assert sum((-1) ** d.k * d.betti for d in h.degrees) == euler_characteristic(x) - 1
    # a ball around a vertex is a cone on its link
    assert h.is_trivial()


# ============================================================================
# Induced maps
# ============================================================================

def test_points_into_path():
    sub = SimplicialComplex.from_simplices([("a",), ("b",)])
    sup = SimplicialComplex.from_simplices([("a", "m"), ("m", "b")])
    m = induced_map_class(sub, sup, 0)
    assert m.kind == InclusionKind.ZERO
    assert (m.source_rank, m.image_rank) == (1, 0)


def test_identity_is_injective():
    x = SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2)])
    m = induced_map_class(x, x, 1)
    assert m.kind == InclusionKind.INJECTIVE
    assert m.image_rank == 1


def test_partial_merge_is_neither():
    sub = SimplicialComplex.from_simplices([("a",), ("b",), ("c",)])
    sup = SimplicialComplex.from_simplices([("a", "b"), ("c",)])
    m = induced_map_class(sub, sup, 0)
    assert m.kind == InclusionKind.NON_INJECTIVE_NONZERO
    assert (m.source_rank, m.image_rank) == (2, 1)


def test_not_a_subcomplex():
    sub = SimplicialComplex.from_simplices([("a", "b")])
    sup = SimplicialComplex.from_simplices([("a",), ("b",)])
    with pytest.raises(ValidationError) as exc:
        induced_map_class(sub, sup, 1)
    assert exc.value.condition == "NotSubcomplex"


# ============================================================================
# Horosphere experiments
# ============================================================================

# Heights are <w, exponents> of the upper triangular representative, so the end
# fixed by upper triangular matrices lies at height -infinity.
def test_tree_annuli_match_walk(tree_ball):
    b, x = tree_ball
    ranks: Dict[int, int] = {}
    for s in range(4):
        a = annulus(b, x, -s, 0)
        walk = components(a.vertices, Model.QUOTIENT)
        ranks[s] = reduced_homology(a).betti(0)
        assert ranks[s] == len(walk) - 1
    # annuli toward the end merge: 4, 4, 2, 2 components
    assert [ranks[s] for s in range(4)] == [3, 3, 1, 1]


def test_tree_annulus_inclusion_kills_classes(tree_ball):
    b, x = tree_ball
    a1, a3 = annulus(b, x, -1, 0), annulus(b, x, -3, 0)
    m = induced_map_class(a1, a3, 0)
    # every component of the small annulus lands in one component of the large one
    hit = {i for i, comp in enumerate(components(a3.vertices, Model.QUOTIENT)) for v in a1.vertices if v in comp}
    assert m.image_rank == len(hit) - 1
    assert m.image_rank < m.source_rank
    assert m.kind == InclusionKind.ZERO


def test_tree_annuli_away_from_end_split(tree_ball):
    b, x = tree_ball
    for s in range(1, 4):
        a = annulus(b, x, 0, s)
        assert reduced_homology(a).betti(0) == len(components(a.vertices, Model.QUOTIENT)) - 1 > 0


def test_rank_two_slice_is_connected():
    b = ball(lat.standard_lattice(2, 3), 2, Model.QUOTIENT, cap=50_000)
    x = build_complex(b.vertices, Model.QUOTIENT)
    pred = HeightInterval(HeightFunction((1, 0, -1)), Fraction(0), Fraction(3)) & Depth(b, b.radius - 1)
    a = full_subcomplex(x, pred)
    assert len(components(a.vertices, Model.QUOTIENT)) == 1
    assert reduced_homology(a).betti(0) == 0
