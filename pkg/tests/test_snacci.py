import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matrecur.errors import EmptySet, IndexOutOfRange, NonPositiveEntry, PeriodicSet, SingletonSet
from matrecur.snacci import (
    IndexSet,
    asymptotic_estimate,
    companion_matrix,
    companion_power_entry,
    make_index_set,
    reduce_set,
    snacci_coefficient,
    snacci_constant,
    snacci_profile,
    snacci_terms,
)

from oracles import companion_by_definition, dominant_root, exact_matpow, fibonacci, series_terms


def small_sets(universe=6):
    for r in range(2, universe + 1):
        for combo in itertools.combinations(range(1, universe + 1), r):
            yield make_index_set(combo)


@pytest.mark.parametrize(
    "raw, elements, j, m",
    [([2, 1], (1, 2), 2, 1), ([2, 4], (2, 4), 4, 2), ([6, 9], (6, 9), 9, 3), ([3, 3, 1], (1, 3), 3, 1)],
)
def test_make_index_set(raw, elements, j, m):
    S = make_index_set(raw)
    assert S.elements == elements
    assert (S.j, S.m) == (j, m)


def test_make_index_set_errors():
    with pytest.raises(EmptySet):
        make_index_set([])
    with pytest.raises(NonPositiveEntry):
        make_index_set([0, 1])
    with pytest.raises(NonPositiveEntry):
        make_index_set([-2])


@pytest.mark.parametrize("raw, reduced", [([1, 2], (1, 2)), ([2, 4], (1, 2)), ([6, 9], (2, 3))])
def test_reduce_set(raw, reduced):
    R = reduce_set(make_index_set(raw))
    assert R.elements == reduced
    assert R.m == 1


@given(st.sets(st.integers(1, 40), min_size=1, max_size=6), st.integers(1, 5))
def test_reduced_modulus_is_one(raw, scale):
    S = make_index_set([scale * x for x in raw])
    assert S.m % scale == 0
    assert reduce_set(S).m == 1


def test_terms_examples():
    assert snacci_terms(make_index_set([1, 2]), 7) == [0, 1, 1, 2, 3, 5, 8]
    assert snacci_terms(make_index_set([2, 4]), 8) == [0, 0, 0, 1, 0, 1, 0, 2]
    for S in small_sets(5):
        assert snacci_terms(S, S.j) == [0] * (S.j - 1) + [1]
    assert snacci_terms(make_index_set([1, 2]), 0) == []


def test_terms_are_exact_beyond_int64():
    terms = snacci_terms(make_index_set([1, 2]), 301)
    assert terms == fibonacci(301)
    assert terms[300] > 2**63


@pytest.mark.parametrize("S", list(small_sets(6)), ids=str)
def test_terms_match_generating_function(S):
    assert snacci_terms(S, 31) == series_terms(list(S), 31)


@pytest.mark.parametrize("S", list(small_sets(6)), ids=str)
def test_terms_companion_and_closed_form_agree(S):
    terms = snacci_terms(S, 31)
    Q = companion_matrix(S)
    j = S.j
    for n in range(j, 31):
        P = exact_matpow(Q, n)
        # last row times the initial vector (F_{j-1}, ..., F_0) = e_1
        assert P[j - 1][0] == terms[n]
        assert companion_power_entry(S, n, j, 1) == terms[n]


@pytest.mark.parametrize(
    "raw, expected",
    [
        ([1, 2], [[1, 1], [1, 0]]),
        ([2], [[0, 1], [1, 0]]),
        ([1, 3], [[1, 0, 1], [1, 0, 0], [0, 1, 0]]),
    ],
)
def test_companion_matrix(raw, expected):
    S = make_index_set(raw)
    assert companion_matrix(S) == expected
    assert companion_matrix(S) == companion_by_definition(raw)


def test_companion_power_entry_examples():
    S = make_index_set([1, 2])
    assert companion_power_entry(S, 3, 1, 1) == 3
    assert companion_power_entry(S, 3, 2, 2) == 1
    assert companion_power_entry(S, 2, 2, 1) == snacci_terms(S, 3)[2]
    with pytest.raises(IndexOutOfRange):
        companion_power_entry(S, 3, 3, 1)
    with pytest.raises(IndexOutOfRange):
        companion_power_entry(S, 1, 1, 1)


@pytest.mark.parametrize(
    "raw, expected",
    [([1, 2], 1.6180339887), ([2, 4], 1.2720196495), ([1, 2, 3], 1.8392867552), ([1, 3], 1.4655712319)],
)
def test_snacci_constant_values(raw, expected):
    phi = snacci_constant(make_index_set(raw))
    assert phi == pytest.approx(expected, abs=1e-10)
    assert phi == pytest.approx(dominant_root(raw), abs=1e-10)


def test_golden_ratio_exact():
    assert snacci_constant(make_index_set([1, 2])) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)
    # S = {2, 4} reduces to the golden ratio under y = phi**2
    assert snacci_constant(make_index_set([2, 4])) ** 2 == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-11)


def test_snacci_constant_singleton_rejected():
    with pytest.raises(SingletonSet):
        snacci_constant(make_index_set([3]))


@pytest.mark.parametrize("S", list(small_sets(6)), ids=str)
def test_snacci_constant_residual(S):
    phi = snacci_constant(S)
    assert abs(sum(phi ** -l for l in S) - 1.0) <= 1e-12
    assert phi > 1.0


@settings(max_examples=60)
@given(st.sets(st.integers(1, 6), min_size=2, max_size=5), st.integers(1, 6))
def test_adding_element_increases_constant(raw, extra):
    if extra in raw:
        return
    S = make_index_set(raw)
    T = make_index_set(list(raw) + [extra])
    assert snacci_constant(T) > snacci_constant(S)


def test_coefficient_fibonacci():
    # F_n ~ phi**n / sqrt(5)
    assert snacci_coefficient(make_index_set([1, 2])) == pytest.approx(1 / math.sqrt(5), abs=1e-12)


def test_coefficient_periodic_rejected():
    with pytest.raises(PeriodicSet):
        snacci_coefficient(make_index_set([2, 4]))
    with pytest.raises(PeriodicSet):
        asymptotic_estimate(make_index_set([2, 4]), 10)


@pytest.mark.parametrize("raw", [[1, 2], [1, 3], [1, 2, 3], [2, 3], [1, 5]])
def test_coefficient_matches_exact_ratio(raw):
    S = make_index_set(raw)
    n = 200 if raw != [1, 5] else 400
    exact = snacci_terms(S, n + 1)[n]
    log_ratio = math.log(exact) - math.log(snacci_coefficient(S)) - n * math.log(snacci_constant(S))
    assert abs(math.expm1(log_ratio)) <= 1e-6


def test_asymptotic_estimate():
    S = make_index_set([1, 2])
    assert asymptotic_estimate(S, 20) == pytest.approx(6765, abs=0.5)
    assert asymptotic_estimate(S, 0) == pytest.approx(0.4472135955, abs=1e-9)
    assert asymptotic_estimate(S, 10**5) == math.inf
    S13 = make_index_set([1, 3])
    ratio = snacci_terms(S13, 201)[200] / asymptotic_estimate(S13, 200)
    assert 1 - 1e-6 <= ratio <= 1 + 1e-6


@pytest.mark.parametrize("raw", [[2, 4], [3, 6], [4, 6], [6, 9], [2, 4, 6], [3, 9, 12]])
def test_zero_pattern_and_reduction(raw):
    S = make_index_set(raw)
    m = S.m
    R = reduce_set(S)
    terms = snacci_terms(S, 31 * m)
    reduced = snacci_terms(R, 31)
    for k, t in enumerate(terms):
        if (k + 1) % m:
            assert t == 0
    for n in range(1, 31):
        assert terms[n * m - 1] == reduced[n - 1]


def test_profile():
    prof = snacci_profile(make_index_set([1, 2]), 5)
    assert prof.terms == (0, 1, 1, 2, 3)
    assert prof.c == pytest.approx(1 / math.sqrt(5))
    assert snacci_profile(make_index_set([2, 4]), 3).c is None


def test_random_sets_residual():
    rng = random.Random(7)
    for _ in range(20):
        S = make_index_set(rng.sample(range(1, 15), rng.randint(2, 5)))
        phi = snacci_constant(S)
        assert abs(sum(phi ** -l for l in S) - 1) <= 1e-12


def test_index_set_requires_sorted():
    with pytest.raises(ValueError):
        IndexSet((2, 1))
