"""Complex-level properties: balls, flags, fixed sets, realization."""
import random
from fractions import Fraction

from app.models.domain import Model, SignVector
from app.models.reports import SuiteResult
from app.properties import prop
from app.properties.generators import random_lattice
from app.services import families, lattice as lat
from app.services.complex import ball, build_complex, direct_simplices, product_check
from app.services.invariants import is_elementary_admissible, partition_from_signs, sign_group
from app.services.realization import cover_starts, epsilon_affine, interval_cover, lift_to_extended, project


def _face_closed(x):
    return None if x.is_face_closed() else {"f_vector": x.f_vector()}


def _flags_match(case):
    vertices, model, x = case
    clique = {s for ss in x.simplices.values() for s in ss}
    direct = direct_simplices(vertices, model)
    return None if clique == direct else {"model": model.value, "clique": len(clique), "direct": len(direct)}


def _homogeneous(case):
    center, model, radius, expected = case
    size = len(ball(center, radius, model).vertices)
    return None if size == expected else {"center": lat.representative(center).to_json(), "size": size}


def _cover(case):
    alpha, r = case
    i, beta = interval_cover(alpha, r)
    n = len(alpha)
    a = alpha[i % n]
    c = cover_starts(alpha, i)
    if not (0 <= beta < 1 and c < r <= c + a and r == c + a * (1 - beta)):
        return {"alpha": [str(x) for x in alpha], "r": str(r)}
    if cover_starts(alpha, i + 1) - c != a:
        return {"alpha": [str(x) for x in alpha], "i": i, "law": "consecutive starts"}
    return None


def _product(case):
    x, s = case
    return None if product_check(x, [s]) else {"signs": str(s)}


def _lift(case):
    classes, weights, r = case
    point = lift_to_extended(classes, weights, r)
    if epsilon_affine(point) != r:
        return {"r": str(r), "law": "epsilon"}
    expected = {}
    for c, w in zip(classes, weights):
        if w:
            expected[c] = expected.get(c, Fraction(0)) + w
    if project(point) != expected:
        return {"r": str(r), "law": "projection"}
    return None


def _random_alpha(rng, n):
    raw = [rng.randint(0, 4) for _ in range(n)]
    if not any(raw):
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return [Fraction(x, total) for x in raw]


def run(seed: int) -> SuiteResult:
    rng = random.Random(seed)
    complexes = []
    flag_cases = []
    for p, dim, model in ((3, 2, Model.QUOTIENT), (2, 3, Model.QUOTIENT), (2, 2, Model.EXTENDED), (2, 3, Model.EXTENDED)):
        b = ball(lat.standard_lattice(p, dim), 1, model)
        x = build_complex(b.vertices, model)
        complexes.append(x)
        flag_cases.append((b.vertices, model, x))

    reference = len(ball(lat.standard_lattice(3, 2), 2, Model.EXTENDED).vertices)
    homogeneity = [(random_lattice(rng, 3, 2), Model.EXTENDED, 2, reference) for _ in range(5)]

    covers = []
    for _ in range(300):
        n = rng.randint(1, 4)
        covers.append((_random_alpha(rng, n), Fraction(rng.randint(-40, 40), rng.randint(1, 12))))

    product_cases = []
    x3 = build_complex(ball(lat.standard_lattice(3, 3), 1, Model.EXTENDED).vertices, Model.EXTENDED)
    pair = families.abels_pair(2)
    for s in sign_group(pair):
        if is_elementary_admissible(partition_from_signs([s]), pair):
            product_cases.append((x3, s))
    product_cases.append((x3, SignVector((1, 1, -1))))

    quotient = build_complex(ball(lat.standard_lattice(2, 3), 1, Model.QUOTIENT).vertices, Model.QUOTIENT)
    lifts = []
    for simplex in quotient.simplices.get(2, [])[:10]:
        classes = [quotient.vertices[i] for i in simplex]
        lifts.append((classes, _random_alpha(rng, 3), Fraction(rng.randint(-20, 20), rng.randint(1, 6))))

    results = [
        prop("face_closure", complexes, _face_closed),
        prop("clique_complex_equals_flag_complex", flag_cases, _flags_match),
        prop("ball_size_homogeneous", homogeneity, _homogeneous),
        prop("interval_cover", covers, _cover),
        prop("fixed_set_product", product_cases, _product),
        prop("lift_inverts_realization", lifts, _lift),
    ]
    return SuiteResult(suite="complex", seed=seed, properties=results)
