from fractions import Fraction
from math import factorial

import pytest

from izansatz.algebra import ZERO, Poly, differentiate
from izansatz.engine_1d import correlators_1d, fg_1d
from izansatz.engine_hmm import (
    correlators_hmm, eval_N, f0k_fat, f1_hmm_partials, fg_hmm, leading_a1, leading_a2,
    n_coefficient, n_powers,
)
from izansatz.forms import tilde_form

N, v = Poly.var("N"), Poly.var("v")


def I(k):
    return Poly.var(f"I{k}")


def test_genus_two():
    expected = ((N + (N ** 3).scale(4)) * I(2) ** 2 * v ** 3 + (N + (N ** 3).scale(2)) * I(3) * v ** 2)
    assert fg_hmm(2) == expected.scale(Fraction(1, 24))


def test_factorial_tilde_coefficients():
    t3 = tilde_form(fg_hmm(3), "factorial")
    assert t3[((5, 1),)] == (N ** 4).scale(5) + (N ** 2).scale(10)
    t4 = tilde_form(fg_hmm(4), "factorial")
    assert t4[((7, 1),)] == (N ** 5).scale(14) + (N ** 3).scale(70) + N.scale(21)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_n_equals_one(g):
    assert eval_N(fg_hmm(g), 1) == fg_1d(g)


def test_correlators_at_n_equals_one():
    table = {k: eval_N(c, 1).constant() for k, c in correlators_hmm(2).items()}
    assert table == correlators_1d(2)


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_n_powers(g):
    powers = n_powers(fg_hmm(g))
    assert max(powers) == g + 1 <= 2 * g - 1
    assert all(p % 2 == (g + 1) % 2 for p in powers)


def test_genus_one_seed():
    assert f1_hmm_partials() == {1: (N * N * v).scale(Fraction(1, 2))}


def test_fat_examples():
    assert f0k_fat(2) == (I(2) ** 2 * v ** 3).scale(Fraction(1, 6)) + (I(3) * v ** 2).scale(Fraction(1, 12))
    assert f0k_fat(4).coeff({"I7": 1, "v": 4}) == Fraction(1, 2880)
    with pytest.raises(ValueError):
        f0k_fat(1)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_fat_is_top_n_part_of_thin(k):
    assert n_coefficient(fg_hmm(k), k + 1) == f0k_fat(k)


@pytest.mark.parametrize("k", range(2, 7))
def test_leading_coefficients(k):
    base = Fraction(1, factorial(k) * factorial(k + 1))
    assert leading_a1(k) == base
    # the k = 2 monomial is I_2^2, whose 1/2! symmetry factor the general formula leaves out
    assert leading_a2(k) == base * k * k * (Fraction(1, 2) if k == 2 else 1)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_homogeneity_and_dilaton(g):
    f = fg_hmm(g)
    rhs = ZERO
    for name in f.variables():
        if name.startswith("I"):
            k = int(name[1:])
            rhs = rhs + (Poly.var(name) * differentiate(f, name)).scale(k + 1)
    assert differentiate(f, "I1").scale(2) == v * rhs
    assert f.weighted_degrees() == {2 * g - 2}
