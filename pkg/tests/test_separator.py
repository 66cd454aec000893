import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fat_point, grid, two_fat_points, two_points
from fatsep.biring import Bidegree, RingSpec
from fatsep.scheme import (random_scheme, reduce_multiplicity, scheme_degree,
                           scheme_ideal)
from fatsep.separator import (HypothesisError, SeparatorSet, acm_check,
                              degree_of_point, expected_separator_count,
                              good_set_verdict, hilbert_function,
                              hilbert_function_oracle, hilbert_relation_check,
                              is_good_set, is_separator, minimal_separators,
                              normalize_coordinates, normalized,
                              not_acm_from_degree, separator_colon_check,
                              separator_count_check, separator_piece_dims,
                              stabilization_corner, x0_y0_avoid_support)

R = RingSpec(1, 1)
R23 = RingSpec(2, 3)

EX_SEPARATORS = ["x1*x2", "x1*y3", "x2*y1", "x2*y2", "y1*y3", "y2*y3", "x0*x2^2",
                 "x2^2*y0", "x0*x2*y3", "x2*y0*y3", "x0*y3^2", "y0*y3^2"]
EX_DEGREES = ((0, 2), (0, 2), (0, 3), (1, 1), (1, 1), (1, 1), (1, 2), (1, 2),
              (2, 0), (2, 1), (2, 1), (3, 0))


def sep_set(Z, i, texts):
    polys = [Z.ring.parse(t) for t in texts]
    return SeparatorSet(i, polys, [f.bidegree() for f in polys])


def test_is_separator_examples():
    Z = two_fat_points()
    f = R23.parse("x1*x2")
    assert is_separator(f, Z, 2)
    assert not is_separator(f, Z, 1)
    for g in scheme_ideal(Z).groebner():
        assert not is_separator(g, Z, 1) and not is_separator(g, Z, 2)
    with pytest.raises(ValueError):
        is_separator(R23.parse("x1 + y1"), Z, 1)


def test_two_fat_points_separators():
    Z = two_fat_points()
    S = minimal_separators(Z, 2)
    assert set(S.polys) == {R23.parse(t) for t in EX_SEPARATORS}
    assert degree_of_point(Z, 2) == EX_DEGREES
    assert len(S.polys) == 12 != scheme_degree(Z) - scheme_degree(reduce_multiplicity(Z, 2))
    assert not_acm_from_degree(Z, 2)


@pytest.mark.parametrize("m", range(1, 6))
def test_fat_point_family(m):
    Z = fat_point(R, m)
    S = minimal_separators(Z, 1)
    assert set(S.polys) == {R.parse(f"x1^{a}*y1^{m - 1 - a}") for a in range(m)}
    assert degree_of_point(Z, 1) == tuple((a, m - 1 - a) for a in range(m))
    assert separator_count_check(Z, 1)
    assert not not_acm_from_degree(Z, 1)


def test_two_points_separators():
    Z = two_points()
    S = minimal_separators(Z, 2)
    assert set(S.polys) == {R.parse("x1"), R.parse("y1")}
    assert degree_of_point(Z, 2) == ((0, 1), (1, 0))
    assert not_acm_from_degree(Z, 2)


def test_separator_set_invariants():
    Z = two_fat_points()
    S = minimal_separators(Z, 2)
    assert [f.bidegree() for f in S.polys] == list(S.degrees) == sorted(S.degrees)
    for f in S.polys:
        assert is_separator(f, Z, 2)


@pytest.mark.parametrize("m,N,want", [(1, 2, 1), (1, 5, 1), (2, 5, 5), (3, 2, 3), (4, 2, 4)])
def test_expected_count(m, N, want):
    assert expected_separator_count(m, N) == want


# good sets ----------------------------------------------------------------------

def test_two_points_not_good():
    Z = two_points()
    good, w = is_good_set(Z, 2, sep_set(Z, 2, ["x1", "y1"]))
    assert not good
    assert w.t == (1, 1)
    I = scheme_ideal(Z)
    assert w.combination and w.combination in I
    assert w.combination.monic() == R.parse("x1*y0 - x0*y1").monic()


def test_good_set_examples():
    Z = fat_point(R, 3)
    assert good_set_verdict(Z, 1)[0]
    Zg = grid(R, [1, 2], [1, 3])
    assert all(is_good_set(Zg, i, minimal_separators(Zg, i))[0] for i in range(1, 5))


def test_good_set_requires_normalized_coordinates():
    Z = fat_point(R, 2, a=(0, 1))
    with pytest.raises(ValueError):
        is_good_set(Z, 1, minimal_separators(Z, 1))
    Z2, S2, change = normalized(Z, minimal_separators(Z, 1), seed=4)
    assert change is not None and x0_y0_avoid_support(Z2)
    assert is_good_set(Z2, 1, S2)[0]


def test_good_set_rejects_non_separators():
    Z = two_points()
    with pytest.raises(ValueError):
        is_good_set(Z, 2, sep_set(Z, 2, ["x1*y0"]))
    with pytest.raises(ValueError):
        is_good_set(Z, 2, sep_set(Z, 2, ["x1*y1 - x1*y0"]))


def test_normalize_coordinates():
    Z = fat_point(R, 1)
    same, change = normalize_coordinates(Z, R.parse("x0"), R.parse("y0"))
    assert same == Z and change.A == [[1, 0], [0, 1]]
    Zt = fat_point(R, 2, a=(0, 1), b=(1, 0))
    moved, change = normalize_coordinates(Zt, R.parse("x0 + x1"), R.parse("y0"))
    assert moved.point(1).a[0] == 1 and x0_y0_avoid_support(moved)
    # the separators transform along with the points
    S = minimal_separators(Zt, 1)
    assert all(is_separator(change.apply(f), moved, 1) for f in S.polys)
    with pytest.raises(ValueError):
        normalize_coordinates(Zt, R.parse("x0"), R.parse("y0"))


# Hilbert functions ---------------------------------------------------------------

def test_hilbert_examples():
    assert hilbert_function(fat_point(R, 1), (3, 3)).values == [[1] * 4] * 4
    assert hilbert_function(fat_point(R, 3), (3, 3)).values == [
        [1, 2, 3, 3], [2, 4, 5, 5], [3, 5, 6, 6], [3, 5, 6, 6]]
    assert hilbert_function(two_points(), (1, 1)).values == [[1, 2], [2, 2]]
    assert hilbert_function_oracle(two_points(), (1, 1)).values == [[1, 2], [2, 2]]


def test_stabilization_corner():
    assert stabilization_corner(fat_point(R, 3)) == (2, 2)
    assert stabilization_corner(fat_point(R, 1)) == (0, 0)
    Z = two_fat_points()
    k = stabilization_corner(Z)
    assert hilbert_function(Z, k)[k] == 12


def test_relation_examples():
    Z = fat_point(R, 3)
    assert hilbert_relation_check(Z, 1, (3, 3))
    assert hilbert_relation_check(fat_point(R, 2), 1, (3, 3))
    assert hilbert_relation_check(Z, 1, (0, 0))
    big = (6, 6)
    assert hilbert_function(Z, big)[big] - len(degree_of_point(Z, 1)) == \
        scheme_degree(reduce_multiplicity(Z, 1))


def test_checks_refuse_without_good_set():
    with pytest.raises(HypothesisError):
        hilbert_relation_check(two_points(), 2, (2, 2))
    with pytest.raises(HypothesisError):
        separator_count_check(two_points(), 2)


def test_colon_chain():
    assert separator_colon_check(fat_point(R, 3), 1)
    Zg = grid(R, [1, 2], [1, 3])
    assert all(separator_colon_check(Zg, i) for i in range(1, 5))


def test_piece_dims_agree():
    Z = two_fat_points()
    for t in [(0, 2), (1, 1), (2, 1), (3, 0), (3, 3)]:
        a, b = separator_piece_dims(Z, 2, t)
        assert a == b


def test_acm_examples():
    assert acm_check(fat_point(R, 3)).is_acm
    assert acm_check(fat_point(R23, 1, a=(1, 2, 3), b=(1, 0, 5, 7))).is_acm
    rep = acm_check(two_fat_points())
    assert not rep.is_acm and rep.witness is None and rep.trials == 3
    assert not acm_check(two_points()).is_acm


def test_acm_witness_certifies():
    from fatsep.gbasis import ideal_equal, ideal_quotient, ideal_sum
    Z = grid(R, [0, 1], [0, 1])
    rep = acm_check(Z, seed=11)
    L, Lp = rep.witness
    I = scheme_ideal(Z)
    assert ideal_equal(ideal_quotient(I, L), I)
    J = ideal_sum(I, L)
    assert ideal_equal(ideal_quotient(J, Lp), J)


# properties -----------------------------------------------------------------------

@given(st.integers(0, 10**6), st.lists(st.integers(1, 3), min_size=1, max_size=3))
@settings(max_examples=12, deadline=None)
def test_hilbert_monotone_and_oracle(seed, mults):
    Z = random_scheme(R, mults, random.Random(seed))
    H = hilbert_function(Z, (4, 4))
    assert H.values == hilbert_function_oracle(Z, (4, 4)).values
    for a in range(5):
        for b in range(5):
            assert H[a, b] <= scheme_degree(Z)
            if a:
                assert H[a - 1, b] <= H[a, b]
            if b:
                assert H[a, b - 1] <= H[a, b]


@given(st.integers(0, 10**6), st.lists(st.integers(1, 3), min_size=1, max_size=3))
@settings(max_examples=10, deadline=None)
def test_separators_are_minimal(seed, mults):
    from fatsep.gbasis import ideal_sum
    Z = random_scheme(R, mults, random.Random(seed))
    S = minimal_separators(Z, 1)
    I = scheme_ideal(Z)
    for k, f in enumerate(S.polys):
        assert is_separator(f, Z, 1)
        rest = ideal_sum(I, S.polys[:k] + S.polys[k + 1:])
        assert f not in rest


def _random_change(Z, rng):
    from fatsep.separator import random_linear_forms
    while True:
        L, Lp = random_linear_forms(Z.ring, rng)
        try:
            return normalize_coordinates(Z, L, Lp)[0]
        except ValueError:
            continue


@given(st.integers(0, 10**6), st.lists(st.integers(1, 3), min_size=2, max_size=3))
@settings(max_examples=10, deadline=None)
def test_degree_tuple_well_defined(seed, mults):
    from fatsep.scheme import FatPointScheme
    rng = random.Random(seed)
    Z = random_scheme(R, mults, rng)
    base = degree_of_point(Z, 1)
    # moving P_1 to the end of the list
    perm = FatPointScheme(R, Z.items[1:] + Z.items[:1])
    assert degree_of_point(perm, len(Z)) == base
    assert degree_of_point(_random_change(Z, rng), 1) == base


@given(st.integers(0, 10**6))
@settings(max_examples=8, deadline=None)
def test_good_set_piece_dimensions(seed):
    rng = random.Random(seed)
    Z = grid(R, rng.sample(range(1000), 2), rng.sample(range(1000), rng.randint(1, 3)),
             mult=rng.randint(1, 2))
    assert acm_check(Z, seed=seed).is_acm
    for i in (1, len(Z)):
        assert good_set_verdict(Z, i, seed=seed)[0]
        degs = degree_of_point(Z, i)
        for a in range(5):
            for b in range(5):
                by_gb, by_oracle = separator_piece_dims(Z, i, (a, b))
                assert by_gb == by_oracle == sum(1 for d in degs if d.precedes((a, b)))
