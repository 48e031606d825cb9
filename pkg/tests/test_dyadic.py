from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from burau_thompson.dyadic import (PLMap, dyadic, is_dyadic, one_sided_log_slopes, parse_dyadic, plmap_compose,
                                   plmap_eval, slope_jumps)
from burau_thompson.randomgen import random_telement
from burau_thompson.thompson import THREE_PIECE_EXAMPLE, to_plmap

F = Fraction
EXAMPLE = to_plmap(THREE_PIECE_EXAMPLE)

points = st.builds(lambda k, n: F(k % 2**n, 2**n), st.integers(0, 2**12), st.integers(0, 10))
seeds = st.integers(0, 10**6)


def test_dyadic_helpers():
    assert dyadic(3, 3) == F(3, 8)
    assert is_dyadic(F(5, 16)) and not is_dyadic(F(1, 3))
    assert parse_dyadic("3/8") == F(3, 8)
    with pytest.raises(ValueError):
        parse_dyadic("1/3")


def test_identity_evaluation():
    assert plmap_eval(PLMap.identity(), F(3, 8)) == F(3, 8)


def test_three_piece_example_pieces():
    assert EXAMPLE == PLMap.from_intervals([((F(0), F(1, 2)), (F(1, 4), F(1, 2))),
                                        ((F(1, 2), F(3, 4)), (F(1, 2), F(1))),
                                        ((F(3, 4), F(1)), (F(0), F(1, 4)))])
    assert plmap_eval(EXAMPLE, F(0)) == F(1, 4)
    assert plmap_eval(EXAMPLE, F(5, 8)) == F(3, 4)


def test_inverse_and_rotation():
    assert plmap_compose(EXAMPLE, EXAMPLE.inverse()) == PLMap.identity()
    half = PLMap.rotation(F(1, 2))
    assert plmap_compose(half, half) == PLMap.identity()


def test_three_piece_example_squared():
    # f(0) = 1/4 and f(1/4) = 1/4 * 1/2 + 1/4
    assert plmap_eval(plmap_compose(EXAMPLE, EXAMPLE), F(0)) == F(3, 8)


def test_one_sided_slopes():
    assert one_sided_log_slopes(PLMap.identity(), F(1, 3)) == (0, 0, 0)
    assert one_sided_log_slopes(EXAMPLE, F(0)) == (0, -1, -1)
    assert one_sided_log_slopes(EXAMPLE, F(1, 8)) == (-1, -1, 0)


def test_slope_jumps_sum_to_zero():
    assert slope_jumps(EXAMPLE) == {F(0): -1, F(1, 2): 2, F(3, 4): -1}
    assert slope_jumps(PLMap.rotation(F(1, 2))) == {}


@given(seeds, seeds, points)
def test_composition_is_pointwise(s1, s2, x):
    import random
    f = to_plmap(random_telement(random.Random(s1)))
    g = to_plmap(random_telement(random.Random(s2)))
    assert plmap_eval(plmap_compose(f, g), x) == plmap_eval(f, plmap_eval(g, x))


@given(seeds, points)
def test_inverse_is_pointwise(s, x):
    import random
    f = to_plmap(random_telement(random.Random(s)))
    assert plmap_eval(f.inverse(), plmap_eval(f, x)) == x


@given(seeds)
def test_json_round_trip(s):
    import random
    f = to_plmap(random_telement(random.Random(s)))
    assert PLMap.from_json(f.to_json()) == f
    assert sum(slope_jumps(f).values()) == 0
