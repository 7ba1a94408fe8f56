import itertools
import logging

import pytest

from modules.errors import DimensionMismatchError, InterpolationError
from modules.gf_linalg import enumerate_subspaces
from modules.hall_numbers import CountSample, HallCounter, heads_first, interpolate, stable_subspaces, subquotient
from modules.orbits import OrbitCatalog
from modules.polynomials import IntPolyQ
from modules.quiver import parse_quiver
from modules.results import HallCache
from modules.verification import dims_up_to


def samples(*pairs):
    return [CountSample(p, ("x",), n) for p, n in pairs]


def test_stable_subspaces_of_p12(a2_catalog):
    p12 = a2_catalog.rep_of(a2_catalog.parse("P12"), 3)
    assert list(stable_subspaces(p12, (1, 0))) == []
    assert len(list(stable_subspaces(p12, (0, 1)))) == 1
    assert len(list(stable_subspaces(p12, (1, 1)))) == 1
    with pytest.raises(DimensionMismatchError):
        list(stable_subspaces(p12, (2, 0)))


def count_by_brute_force(rep, e):
    q, p, d = rep.quiver, rep.p, rep.dim
    found = 0
    for U in itertools.product(*(list(enumerate_subspaces(d[i], e[i], p)) for i in range(q.size))):
        if all(U[j].contains_rows((U[i].basis.data @ xa.data.T) % p)
               for (i, j), xa in zip(q.arrow_indices, rep.matrices)):
            found += 1
    return found


def test_heads_come_first(a3):
    sink = parse_quiver("vertices: 1 2 3\narrows: 1->2 3->2\n")
    assert heads_first(sink) == [1, 0, 2]
    assert heads_first(a3) == [2, 1, 0]


@pytest.mark.parametrize("catalog_name,d", [("a3_catalog", (1, 2, 1)), ("d4_catalog", (1, 1, 1, 2))])
def test_stable_subspaces_match_brute_force(request, catalog_name, d):
    catalog = request.getfixturevalue(catalog_name)
    for X in catalog.labels(d):
        rep = catalog.rep_of(X, 2)
        for e in itertools.product(*(range(x + 1) for x in d)):
            listed = list(stable_subspaces(rep, e))
            distinct = {tuple(u.key() for u in U) for U in listed}
            assert len(distinct) == len(listed) == count_by_brute_force(rep, e), (catalog.name(X), e)


def test_subquotient_types(a2_catalog):
    p12 = a2_catalog.rep_of(a2_catalog.parse("P12"), 5)
    (U,) = stable_subspaces(p12, (0, 1))
    sub, quot = subquotient(p12, U)
    assert a2_catalog.name(a2_catalog.classify(sub)) == "S2"
    assert a2_catalog.name(a2_catalog.classify(quot)) == "S1"


@pytest.mark.parametrize("p", [2, 3, 5])
def test_hall_number_examples(a2_catalog, a2_counter, p):
    parse = a2_catalog.parse
    assert a2_counter.hall_number(parse("S1+S2"), parse("S1"), parse("S2"), p) == 1
    assert a2_counter.hall_number(parse("P12"), parse("S1"), parse("S2"), p) == 1
    assert a2_counter.hall_number(parse("P12"), parse("S2"), parse("S1"), p) == 0


def test_hall_number_dimension_check(a2_catalog, a2_counter):
    parse = a2_catalog.parse
    with pytest.raises(DimensionMismatchError):
        a2_counter.hall_number(parse("P12"), parse("S1"), parse("S1"), 2)


def test_filtration_examples(a2_catalog, a2_counter):
    parse = a2_catalog.parse
    chain = a2_counter.canonical_chain(parse("S1+S2"))
    assert [a2_catalog.name(c) for c in chain] == ["S1", "0", "S2"]
    assert a2_counter.filtration_count(parse("P12"), chain, 3) == 1
    assert a2_counter.filtration_count(parse("S1+S2"), chain, 3) == 1
    for M in a2_catalog.labels((2, 1)):
        assert a2_counter.filtration_count(M, (M,), 5) == 1


def test_partition_of_subspace_count(a3_catalog, a3_counter):
    for p in (2, 3):
        for d in dims_up_to(3, 3):
            for X in a3_catalog.labels(d):
                rep = a3_catalog.rep_of(X, p)
                for e in dims_up_to(3, sum(d)):
                    if any(a > b for a, b in zip(e, d)):
                        continue
                    total = sum(1 for _ in stable_subspaces(rep, e))
                    assert sum(a3_counter.subquotient_counts(X, e, p).values()) == total


def test_two_layer_chains_counted_directly_are_hall_numbers(a3_catalog, a3_counter):
    for d in dims_up_to(3, 3):
        for e in dims_up_to(3, sum(d)):
            f = tuple(a - b for a, b in zip(d, e))
            if any(x < 0 for x in f) or not any(f):
                continue
            for X in a3_catalog.labels(d):
                for A in a3_catalog.labels(f):
                    for B in a3_catalog.labels(e):
                        for p in (2, 3):
                            direct = a3_counter.count_filtrations_directly(X, (A, B), p)
                            assert direct == a3_counter.hall_number(X, A, B, p)
                            assert direct == a3_counter.filtration_count(X, (A, B), p)


@pytest.mark.parametrize("catalog_name,dims", [("a2_catalog", [(2, 1), (1, 2), (2, 2)]),
                                               ("a3_catalog", [(1, 1, 1), (1, 2, 1)])])
def test_dynamic_programme_matches_direct_enumeration(request, catalog_name, dims):
    catalog = request.getfixturevalue(catalog_name)
    counter = HallCounter(catalog)
    for d in dims:
        labels = catalog.labels(d)
        for M in labels:
            for N in labels:
                chain = counter.canonical_chain(N)
                assert counter.filtration_count(M, chain, 2) == counter.count_filtrations_directly(M, chain, 2)


def test_interpolate_examples():
    assert interpolate(samples((2, 3), (3, 4), (5, 6), (7, 8)), 1) == IntPolyQ((1, 1))
    assert interpolate(samples((2, 1), (3, 1), (5, 1)), 0) == IntPolyQ((1,))
    assert interpolate(samples((2, 1), (3, 2), (5, 4), (7, 6)), 1, holdout=1) == IntPolyQ((-1, 1))


def test_interpolate_failures():
    with pytest.raises(InterpolationError):
        interpolate(samples((2, 3), (3, 4), (5, 6), (7, 9)), 1)
    with pytest.raises(InterpolationError):
        interpolate(samples((2, 3), (3, 4)), 1)
    with pytest.raises(InterpolationError):
        interpolate(samples((2, 0), (3, 1), (5, 0), (7, 3), (11, 5)), 2)


def test_hall_polynomials(a2_catalog, a2_counter):
    parse = a2_catalog.parse
    assert a2_counter.hall_polynomial(parse("S1+S2"), parse("S1"), parse("S2")) == IntPolyQ((1,))
    assert a2_counter.generalized_hall_polynomial(parse("P12"), parse("S1+S2")) == IntPolyQ((1,))
    for d in dims_up_to(2, 3):
        for M in a2_catalog.labels(d):
            assert a2_counter.generalized_hall_polynomial(M, M).leading_coefficient == 1


def test_gaussian_binomial_as_hall_polynomial():
    catalog = OrbitCatalog(parse_quiver("vertices: 1\narrows:"))
    counter = HallCounter(catalog)
    s = catalog.simple("1")
    assert counter.hall_polynomial(s + s, s, s) == IntPolyQ((1, 1))
    assert counter.degree_bound(s + s, s, s) == 1
    three = s + s + s
    assert counter.hall_polynomial(three, s, s + s) == IntPolyQ((1, 1, 1))


def test_values_are_non_negative(a3_catalog, a3_counter):
    for X in a3_catalog.labels((1, 1, 1)):
        for (A, B), poly in a3_counter.hall_polynomials_into(X, (0, 1, 1)).items():
            assert all(poly(p) >= 0 for p in (2, 3, 5, 7, 11, 13, 17))


def test_prime_list_is_extended(a2_catalog, caplog):
    counter = HallCounter(a2_catalog, (2, 3, 5))
    with caplog.at_level(logging.WARNING):
        assert counter.primes_for(1) == (2, 3, 5, 7)
    assert "extending primes" in caplog.text
    assert counter.primes_for(0) == (2, 3, 5)


def test_cache_is_consulted(a2, a2_catalog):
    with HallCache(None, a2, (2, 3, 5, 7, 11, 13)) as cache:
        counter = HallCounter(a2_catalog, cache=cache)
        parse = a2_catalog.parse
        counter.hall_polynomial(parse("P12"), parse("S1"), parse("S2"))
        assert cache.get("P12|S1|S2") == IntPolyQ((1,))
        cache.put("S1+S2|S1|S2", IntPolyQ((7,)))
        assert counter.hall_polynomial(parse("S1+S2"), parse("S1"), parse("S2")) == IntPolyQ((7,))


def test_degree_bounds_do_not_depend_on_the_cache(a2, a2_catalog):
    parse = a2_catalog.parse
    triple = (parse("S1^2+S2"), parse("S1"), parse("S1+S2"))
    with HallCache(None, a2, (2, 3, 5, 7, 11, 13)) as cache:
        cold = HallCounter(a2_catalog, cache=cache)
        poly = cold.hall_polynomial(*triple)
        warm = HallCounter(a2_catalog, cache=cache)
        assert warm.hall_polynomial(*triple) == poly == IntPolyQ((1, 1))
        assert warm.degree_bounds == cold.degree_bounds == {"S1^2+S2|S1|S1+S2": 1}
