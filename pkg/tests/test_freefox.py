import random

import pytest
from hypothesis import given, strategies as st

from burau_thompson.braided import halftwist_aut
from burau_thompson.exactalg import ONE, T, ContractViolation, LaurentPoly
from burau_thompson.freefox import (AutFInd, FWord, StructuredOperator, autf_apply, autf_compose, fox_derivative,
                                    fox_vector, inner_automorphism, magnus_matrix, word_index)
from burau_thompson.randomgen import random_fword
from burau_thompson.trees import edges_within

Q, Q2, P = ("", 0), ("L", 0), ("R", 0)
g, g2, gp = FWord.gen(Q), FWord.gen(Q2), FWord.gen(P)
seeds = st.integers(0, 10**6)
EDGES = edges_within(4)


def random_aut(seed: int, length: int = 3) -> AutFInd:
    rng = random.Random(seed)
    out = AutFInd.identity()
    for _ in range(length):
        out = autf_compose(out, halftwist_aut(rng.choice(EDGES), rng.choice((1, -1))))
    return out


def test_word_index_examples():
    assert word_index(g) == 1
    assert word_index(g * g2.inverse()) == 0
    assert word_index(FWord()) == 0


def test_free_reduction():
    assert g * g.inverse() == FWord()
    assert g2.conj(Q) == g2 * g * g2.inverse()


def test_apply_examples():
    w = random_fword(random.Random(1), 6)
    assert autf_apply(AutFInd.identity(), w) == w
    sigma = halftwist_aut((Q, Q2))
    assert autf_apply(sigma, g * g) == g2 * g2
    assert autf_apply(sigma, g * g2) == g2 * g2.conj(Q)


def test_half_twist_cases():
    sigma = halftwist_aut((Q, Q2))
    assert sigma.image(Q) == g2
    assert sigma.image(Q2) == g2.conj(Q)
    assert sigma.image(("LL", 0)) == FWord.gen(("LL", 0))
    assert sigma.image((("v0"), 3)) == FWord.gen(("v0", 3))


def test_inverse_and_full_twist():
    plus, minus = halftwist_aut((Q, Q2)), halftwist_aut((Q, Q2), -1)
    assert autf_compose(plus, minus) == AutFInd.identity() == autf_compose(minus, plus)
    full = autf_compose(plus, plus)
    assert full.image(Q) == (g2 * g) * g * (g2 * g).inverse()


def test_fox_examples():
    assert fox_derivative(g, Q) == ONE
    assert fox_derivative(gp * g, Q) == T
    assert fox_derivative(g2.conj(Q), Q) == T
    assert fox_derivative(g.conj(Q2), Q) == ONE - T
    assert fox_derivative(g2.conj(Q), Q2) == ONE - T


@given(seeds, st.integers(0, 12))
def test_fundamental_formula(seed, n):
    """t^ind(w) - 1 = sum_q d_q(w) (t - 1) once every generator is sent to t."""
    w = random_fword(random.Random(seed), n)
    total = sum(fox_vector(w).values(), LaurentPoly()) * (T - ONE)
    assert total == LaurentPoly.monomial(1, word_index(w)) - ONE


@given(seeds, st.integers(0, 8), st.integers(0, 8))
def test_fox_product_rule(seed, m, n):
    rng = random.Random(seed)
    u, v = random_fword(rng, m), random_fword(rng, n)
    tu = LaurentPoly.monomial(1, word_index(u))
    for q in set(fox_vector(u * v)) | set(fox_vector(u)) | set(fox_vector(v)):
        assert fox_derivative(u * v, q) == fox_derivative(u, q) + tu * fox_derivative(v, q)


@given(seeds, seeds)
def test_index_preserved(s1, s2):
    alpha = random_aut(s1)
    w = random_fword(random.Random(s2), 8)
    assert word_index(autf_apply(alpha, w)) == word_index(w)


@given(seeds, seeds, seeds)
def test_composition_acts_on_words(s1, s2, s3):
    a, b = random_aut(s1, 2), random_aut(s2, 2)
    w = random_fword(random.Random(s3), 5)
    assert autf_apply(autf_compose(a, b), w) == autf_apply(a, autf_apply(b, w))


@given(seeds, seeds)
def test_magnus_homomorphism(s1, s2):
    a, b = random_aut(s1), random_aut(s2)
    assert magnus_matrix(autf_compose(a, b)) == magnus_matrix(a) @ magnus_matrix(b)


def test_magnus_identity():
    assert magnus_matrix(AutFInd.identity()) == StructuredOperator.identity()


def test_half_twist_determinant():
    assert magnus_matrix(halftwist_aut((Q, Q2))).determinant() == -T
    assert magnus_matrix(halftwist_aut((Q, Q2), -1)).determinant() == -LaurentPoly.monomial(1, -1)


def test_inner_automorphism_background():
    op = magnus_matrix(inner_automorphism(g))
    assert op.has_trivial_background() and not op.has_unit_background()
    with pytest.raises(ContractViolation):
        op.determinant()
    assert magnus_matrix(inner_automorphism(g * g2.inverse())).determinant() == ONE


def test_index_violation_rejected():
    sigma = halftwist_aut((Q, Q2))
    bad = AutFInd({**sigma.exceptional, Q: g * g}, sigma.components)
    with pytest.raises(ContractViolation):
        magnus_matrix(bad)


@given(seeds)
def test_json_round_trip(seed):
    a = random_aut(seed)
    assert AutFInd.from_json(a.to_json()) == a
    w = random_fword(random.Random(seed), 6)
    assert FWord.from_json(w.to_json()) == w
