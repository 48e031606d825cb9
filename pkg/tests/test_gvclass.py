import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from burau_thompson.dyadic import plmap_eval
from burau_thompson.gvclass import OrderError, cocycle_defect, cyclic_class_residue, cyclic_sum, element_order, gv
from burau_thompson.randomgen import random_telement
from burau_thompson.thompson import THREE_PIECE_EXAMPLE, TElement, compose, inverse, power, to_plmap
from burau_thompson.trees import common_refinement

F = Fraction
ID = TElement.identity()
R3 = TElement.rotation(3)
seeds = st.integers(0, 10**6)


def elem(seed):
    return random_telement(random.Random(seed), 6)


def log2_exact(q: Fraction) -> int:
    k = q.numerator.bit_length() - 1 if q >= 1 else -(q.denominator.bit_length() - 1)
    assert F(2) ** k == q
    return k


def finite_difference_slopes(f, x: Fraction, eps: Fraction) -> tuple[int, int]:
    def gap(a, b):
        return (b - a) % 1
    right = gap(plmap_eval(f, x), plmap_eval(f, (x + eps) % 1)) / eps
    left = gap(plmap_eval(f, (x - eps) % 1), plmap_eval(f, x)) / eps
    return log2_exact(left), log2_exact(right)


def exhaustive_gv(g: TElement, h: TElement) -> int:
    """Determinant sum over every dyadic point of a level finer than all breakpoints,
    slopes by finite differences."""
    fh, fgh = to_plmap(h), to_plmap(compose(g, h))
    level = 1 + max(x.denominator.bit_length() for x in fh.breakpoints() + fgh.breakpoints() + [F(1)])
    eps = F(1, 2 ** (level + 8))
    total = 0
    for k in range(2 ** level):
        x = F(k, 2 ** level)
        hl, hr = finite_difference_slopes(fh, x, eps)
        gl, gr = finite_difference_slopes(fgh, x, eps)
        total += hr * (gr - gl) - gr * (hr - hl)
    return total


def test_trivial_values():
    assert gv(THREE_PIECE_EXAMPLE, ID) == 0
    assert gv(ID, THREE_PIECE_EXAMPLE) == 0


def test_three_piece_example_against_exhaustive_oracle():
    assert exhaustive_gv(THREE_PIECE_EXAMPLE, THREE_PIECE_EXAMPLE) == gv(THREE_PIECE_EXAMPLE, THREE_PIECE_EXAMPLE) == -3


def test_order_three_rotation_values():
    assert exhaustive_gv(R3, R3) == gv(R3, R3) == -3
    assert gv(R3, power(R3, 2)) == 0


@given(seeds, seeds)
def test_breakpoint_sum_matches_exhaustive_oracle(a, b):
    g, h = elem(a), elem(b)
    assert gv(g, h) == exhaustive_gv(g, h)


def test_defect_examples():
    assert cocycle_defect(ID, ID, ID) == 0
    assert cocycle_defect(THREE_PIECE_EXAMPLE, THREE_PIECE_EXAMPLE, THREE_PIECE_EXAMPLE) == 0
    assert cocycle_defect(R3, THREE_PIECE_EXAMPLE, inverse(R3)) == 0


@given(seeds, seeds, seeds)
def test_cocycle_identity(a, b, c):
    assert cocycle_defect(elem(a), elem(b), elem(c)) == 0


@given(seeds, seeds)
def test_depends_only_on_germs(a, b):
    g, h = elem(a), elem(b)
    rng = random.Random(a ^ b)
    fine = random_telement(rng, 6).symbol.t0
    r, _, _ = common_refinement(g.symbol.t0, fine)
    assert gv(g.symbol.expand_source(r), h) == gv(g, h)


def test_residues():
    r2 = TElement.rotation(2)
    assert cyclic_class_residue(gv, r2, 2) == 0
    assert cyclic_sum(gv, R3, 3) == -3
    assert cyclic_class_residue(gv, R3, 3) == 0
    assert cyclic_class_residue(lambda g, h: 0, R3, 3) == 0
    assert element_order(TElement.rotation(5)) == 5
    with pytest.raises(OrderError):
        cyclic_class_residue(gv, R3, 2)


@given(st.integers(2, 6), st.dictionaries(st.integers(0, 5), st.integers(-9, 9)))
def test_residue_is_coboundary_invariant(n, cochain):
    r = TElement.rotation(n)
    powers = [power(r, i) for i in range(n)]

    def b(g):
        return cochain.get(powers.index(g), 0)

    def shifted(g, h):
        return gv(g, h) + b(g) + b(h) - b(compose(g, h))
    assert cyclic_class_residue(shifted, r, n) == cyclic_class_residue(gv, r, n)
