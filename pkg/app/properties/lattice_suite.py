"""Lattice arithmetic properties."""
import random
from fractions import Fraction

from app.models.domain import Model, SignVector
from app.models.reports import SuiteResult
from app.properties import prop
from app.properties.generators import (
    random_involution,
    random_lattice,
    random_matrix,
    random_unimodular,
    random_unipotent,
)
from app.services import lattice as lat
from app.services.complex import ball
from app.services.padic import PMatrix, valuation

PRIMES = (2, 3, 5)


def _basis_independent(case):
    a, u = case
    again = lat.canonicalize(a.basis() @ u)
    if again != a or lat.canonicalize(again.basis()) != again:
        return {"lattice": a.to_json(), "change": u.to_json()}
    return None


def _index_additive(case):
    a, b, c = case
    if lat.index(a, b) + lat.index(b, c) != lat.index(a, c):
        return {"lattices": [x.to_json() for x in case]}
    # independence of the common sublattice: compare with an explicit one
    k = max(max(x.exponents) for x in (a, b))
    common = lat.standard_lattice(a.p, a.dim).scaled(k)
    while not (a.contains(common) and b.contains(common)):
        k += 1
        common = common.scaled(1)
    via = (common.total - a.total) - (common.total - b.total)
    if via != lat.index(a, b):
        return {"lattices": [a.to_json(), b.to_json()], "common": common.to_json()}
    return None


def _epsilon_equivariant(case):
    g, a = case
    lhs = lat.epsilon(lat.act(g, a))
    rhs = lat.epsilon(a) - Fraction(valuation(g.det(), g.p), a.dim)
    return None if lhs == rhs else {"g": g.to_json(), "lattice": a.to_json()}


def _retraction_laws(case):
    u, t_exps, a = case
    if lat.retraction(lat.act(u, a)) != lat.retraction(a):
        return {"law": "unipotent", "u": u.to_json(), "lattice": a.to_json()}
    t = PMatrix.diagonal([Fraction(a.p) ** e for e in t_exps], a.p)
    moved = lat.retraction(lat.act(t, a))
    expected = tuple(x + e for x, e in zip(lat.retraction(a), t_exps))
    if moved != expected:
        return {"law": "diagonal", "t": list(t_exps), "lattice": a.to_json()}
    return None


def _neighbor_counts(case):
    p, dim, model = case
    found = len(lat.neighbors(lat.standard_lattice(p, dim), model))
    expected = lat.expected_neighbor_count(p, dim, model)
    return None if found == expected else {"p": p, "dim": dim, "model": model.value, "found": found}


def _involution_theorem(_):
    s = SignVector((1, -1))
    for a in lat.lattices_between(-1, 1, 3, 2):
        r = lat.involution_analysis(s, a)
        if r.fixed != r.splits:
            return {"lattice": a.to_json(), "fixed": r.fixed, "splits": r.splits}
    witnesses = 0
    for a in lat.lattices_between(-1, 1, 2, 2):
        r = lat.involution_analysis(s, a)
        if r.splits and not r.fixed:
            return {"p": 2, "lattice": a.to_json(), "law": "splits implies fixed"}
        witnesses += r.fixed and not r.splits
    return None if witnesses else {"p": 2, "law": "no fixed non-split lattice"}


def _diagonalize(g):
    u, d = lat.diagonalize_involution(g)
    conj = u.inverse() @ g @ u
    if not u.is_unipotent_upper() or conj != PMatrix.diagonal(d.entries, g.p) or tuple(g.diag()) != d.entries:
        return {"g": g.to_json()}
    return None


def _borel(a):
    b = lat.borel_reduce(a)
    if not b.is_upper_triangular() or lat.act(b, lat.standard_lattice(a.p, a.dim)) != a:
        return {"lattice": a.to_json()}
    return None


def run(seed: int) -> SuiteResult:
    rng = random.Random(seed)
    lattices = [random_lattice(rng, rng.choice(PRIMES), rng.choice((2, 3))) for _ in range(40)]
    changes = [(a, random_unimodular(rng, a.p, a.dim)) for a in lattices]
    triples = []
    for _ in range(20):
        p, dim = rng.choice(PRIMES), rng.choice((2, 3))
        triples.append(tuple(random_lattice(rng, p, dim) for _ in range(3)))
    actions = [(random_matrix(rng, a.p, a.dim), a) for a in lattices]
    retractions = [
        (random_unipotent(rng, a.p, a.dim), tuple(rng.randint(-2, 2) for _ in range(a.dim)), a)
        for a in lattices
    ]
    counts = [(p, dim, model) for p in PRIMES for dim in (2, 3) for model in Model]
    involutions = [random_involution(rng, 3, rng.choice((2, 3))) for _ in range(40)]
    radius_one = ball(lat.standard_lattice(2, 3), 1, Model.EXTENDED).vertices

    results = [
        prop("canonical_form_basis_independent", changes, _basis_independent),
        prop("index_additive", triples, _index_additive),
        prop("epsilon_equivariance", actions, _epsilon_equivariant),
        prop("retraction_laws", retractions, _retraction_laws),
        prop("neighbor_counts_gaussian_binomial", counts, _neighbor_counts),
        prop("involution_fixed_iff_split", [None], _involution_theorem),
        prop("diagonalize_involution_round_trip", involutions, _diagonalize),
        prop("borel_reduce", radius_one, _borel),
    ]
    return SuiteResult(suite="lattice", seed=seed, properties=results)
