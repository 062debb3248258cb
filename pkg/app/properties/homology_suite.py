"""Homology fixtures and chain-level laws."""
import random
from math import prod

import sympy

from app.models.domain import InclusionKind, Model
from app.models.reports import SuiteResult
from app.properties import prop
from app.services import lattice as lat
from app.services.complex import SimplicialComplex, ball, build_complex
from app.services.homology import (
    boundary_matrices,
    euler_characteristic,
    induced_map_class,
    reduced_homology,
    smith_normal_form,
)

RP2_TRIANGLES = [
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
    (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4),
]


def fixtures() -> dict:
    """name -> (complex, {degree: (betti, torsion)}) for the standard spaces."""
    s0 = SimplicialComplex.from_simplices([(0,), (1,)])
    s1 = SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2)])
    s2 = SimplicialComplex.from_simplices([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    rp2 = SimplicialComplex.from_simplices(RP2_TRIANGLES)
    return {
        "S0": (s0, {0: (1, [])}),
        "S1": (s1, {0: (0, []), 1: (1, [])}),
        "S2": (s2, {0: (0, []), 1: (0, []), 2: (1, [])}),
        "RP2": (rp2, {0: (0, []), 1: (0, [2]), 2: (0, [])}),
    }


def _fixture(case):
    name, (x, expected) = case
    h = reduced_homology(x)
    for k, (betti, torsion) in expected.items():
        if h.betti(k) != betti or h.torsion(k) != torsion:
            return {"fixture": name, "homology": h.to_json()}
    cone = reduced_homology(x.cone())
    if not cone.is_trivial():
        return {"fixture": name, "cone": cone.to_json()}
    return None


def _boundary_squares_zero(x):
    return None if boundary_matrices(x).check() else {"f_vector": x.f_vector()}


def _euler(x):
    h = reduced_homology(x)
    alternating = sum((-1) ** d.k * d.betti for d in h.degrees)
    return None if alternating == euler_characteristic(x) - 1 else {"f_vector": x.f_vector()}


def _snf(m):
    snf = smith_normal_form(m)
    ds = snf.divisors
    if any(b % a for a, b in zip(ds, ds[1:])):
        return {"matrix": m, "divisors": ds}
    if len(m) == len(m[0]) and snf.rank == len(m):
        det = _det(m)
        if abs(det) != prod(ds):
            return {"matrix": m, "divisors": ds, "det": det}
    return None


def _det(m):
    return int(sympy.Matrix(m).det())


def _identity_map(x):
    h = reduced_homology(x)
    for d in h.degrees:
        if d.betti or d.torsion:
            m = induced_map_class(x, x, d.k)
            if m.kind != InclusionKind.INJECTIVE:
                return {"degree": d.k, "kind": m.kind.value}
    return None


def run(seed: int) -> SuiteResult:
    rng = random.Random(seed)
    named = list(fixtures().items())
    complexes = [x for _, (x, _) in named]
    for p, dim in ((3, 2), (2, 3)):
        complexes.append(build_complex(ball(lat.standard_lattice(p, dim), 1, Model.QUOTIENT).vertices, Model.QUOTIENT))
    matrices = []
    for _ in range(60):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        if rng.random() < 0.5:
            cols = rows
        matrices.append([[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)])

    results = [
        prop("standard_fixtures_and_cones", named, _fixture),
        prop("boundary_squares_to_zero", complexes, _boundary_squares_zero),
        prop("euler_characteristic", complexes, _euler),
        prop("smith_divisor_chain", matrices, _snf),
        prop("identity_inclusion_injective", [x for _, (x, _) in named], _identity_map),
    ]
    return SuiteResult(suite="homology", seed=seed, properties=results)
