"""Partition combinatorics properties."""
import random

from app.models.domain import Engine, Partition, SignVector
from app.models.reports import SuiteResult
from app.properties import prop
from app.properties.generators import random_pair, random_partition
from app.services import families
from app.services.invariants import (
    admissible_partitions,
    common_refinement,
    derived_vector,
    essential_dimension,
    is_admissible,
    is_partition_of,
    minimal_essential_dimension,
    partition_from_signs,
    sign_group,
)


def _subgroup_closed(pair):
    group = set(sign_group(pair))
    if SignVector.identity(pair.size) not in group:
        return {"pair": [pair.w1, pair.w2], "missing": "identity"}
    for a in group:
        for b in group:
            if a * b not in group:
                return {"pair": [pair.w1, pair.w2], "product": [str(a), str(b)]}
    return None


def _generated_subgroup(pair, rng):
    group = sign_group(pair)
    chosen = rng.sample(group, min(len(group), rng.randint(0, 3)))
    closure = {SignVector.identity(pair.size)}
    for s in chosen:
        closure |= {s * t for t in closure}
    if partition_from_signs(chosen, pair.size) != partition_from_signs(closure, pair.size):
        return {"signs": [str(s) for s in chosen]}
    return None


def _refinement_laws(case):
    a, b, c = case
    if common_refinement([a, b]) != common_refinement([b, a]):
        return {"law": "commutative", "inputs": [a.to_json(), b.to_json()]}
    if common_refinement([common_refinement([a, b]), c]) != common_refinement([a, common_refinement([b, c])]):
        return {"law": "associative"}
    if common_refinement([a, a]) != a:
        return {"law": "idempotent", "input": a.to_json()}
    r = common_refinement([a, b, c])
    if not all(r.refines(q) for q in (a, b, c)):
        return {"law": "refines inputs"}
    return None


def _monotone(pair):
    v = derived_vector(pair)
    parts = [q for q in admissible_partitions(pair) if is_partition_of(q, v)]
    for coarse in parts:
        for fine in parts:
            if fine.refines(coarse) and essential_dimension(fine, v) > essential_dimension(coarse, v):
                return {"coarse": coarse.to_json(), "fine": fine.to_json()}
    return None


def _m_bounds(pair):
    m, _ = minimal_essential_dimension(pair)
    return None if 1 <= m <= pair.n else {"pair": [pair.w1, pair.w2], "m": m}


def _all_even(case):
    pair, partitions = case
    for q in partitions:
        if not is_admissible(q, pair):
            return {"pair": [pair.w1, pair.w2], "partition": q.to_json()}
    return None


def _engines_agree(pair):
    search = admissible_partitions(pair, Engine.SEARCH)
    oracle = admissible_partitions(pair, Engine.ORACLE)
    if search != oracle:
        return {"pair": [pair.w1, pair.w2], "search": len(search), "oracle": len(oracle)}
    if minimal_essential_dimension(pair, Engine.SEARCH) != minimal_essential_dimension(pair, Engine.ORACLE):
        return {"pair": [pair.w1, pair.w2], "m": "engines disagree"}
    return None


def _doubling(pair):
    v, v2 = derived_vector(pair), derived_vector(pair.doubled())
    size = pair.size
    for labels in _all_labelings(size):
        q = Partition.from_labels(labels)
        if is_partition_of(q, v) != is_partition_of(q, v2):
            return {"pair": [pair.w1, pair.w2], "partition": q.to_json()}
    return None


def _all_labelings(size):
    """Restricted growth strings: one labelling per set partition."""
    def grow(prefix, top):
        if len(prefix) == size:
            yield tuple(prefix)
            return
        for lab in range(top + 2):
            yield from grow(prefix + [lab], max(top, lab))
    yield from grow([0], 0)


def _families(_):
    for n in range(2, 9):
        m, _w = minimal_essential_dimension(families.abels_pair(n))
        if m != 1:
            return {"family": "one", "n": n, "m": m}
    for n in range(1, 6):
        for m0 in range(1, n + 1):
            m, _w = minimal_essential_dimension(families.prescribed_pair(n, m0))
            if m != m0:
                return {"family": "two", "n": n, "m0": m0, "m": m}
    return None


def run(seed: int) -> SuiteResult:
    rng = random.Random(seed)
    corpus = [random_pair(rng) for _ in range(25)]
    small = [q for q in corpus if q.size <= 5]
    triples = []
    for _ in range(30):
        size = rng.randint(2, 6)
        triples.append(tuple(random_partition(rng, size) for _ in range(3)))
    even_pairs = [q.doubled() for q in corpus[:5]]
    even_cases = [(q, [random_partition(rng, q.size) for _ in range(20)]) for q in even_pairs]

    results = [
        prop("sign_group_is_subgroup", corpus, _subgroup_closed),
        prop("signs_vs_generated_subgroup", corpus, lambda q: _generated_subgroup(q, rng)),
        prop("common_refinement_laws", triples, _refinement_laws),
        prop("essential_dimension_monotone", small, _monotone),
        prop("m_between_1_and_n", corpus, _m_bounds),
        prop("all_even_pairs_all_admissible", even_cases, _all_even),
        prop("engine_equivalence", small, _engines_agree),
        prop("doubling_keeps_partitions_of_v", small, _doubling),
        prop("example_families", [None], _families),
    ]
    return SuiteResult(suite="invariants", seed=seed, properties=results)
