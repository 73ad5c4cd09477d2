from fractions import Fraction
from math import factorial

from hypothesis import given, strategies as st

from izansatz.algebra import ZERO, Policy, Poly, differentiate, mul, substitute, truncate
from izansatz.coords import (
    TPolicy, ghost_from_t, ghost_from_t_formal, ghost_in_i, i0_poly, i0_series, i_from_t, i_poly, roundtrip_check,
    roundtrip_residual, t_from_i, to_t,
)

t0, t1, t2 = (Poly.var(f"t{k}") for k in range(3))


def lagrange_i0(tp: TPolicy) -> Poly:
    """x = t0 + f(x), f(x) = sum_{n>=1} t_n x^n/n!:  x = t0 + sum_k 1/k! d^{k-1}/dt0^{k-1} f(t0)^k."""
    pol = Policy(tp.max_degree + tp.max_degree, frozenset(tp.names("t")))
    f = sum((Poly.var(f"t{n}") * t0 ** n).scale(Fraction(1, factorial(n)))
            for n in range(1, tp.top + 1))
    acc = t0
    fk = Poly.const(1)
    for k in range(1, tp.max_degree + 1):
        fk = mul(fk, f, pol)
        term = fk
        for _ in range(k - 1):
            term = differentiate(term, "t0")
        acc = acc + term.scale(Fraction(1, factorial(k)))
    return truncate(acc, Policy(tp.max_degree, frozenset(tp.names("t"))))


def test_i0_examples():
    assert i0_poly(TPolicy(3, 1)) == t0
    assert i0_poly(TPolicy(3, 3)) == t0 + t0 * t1 + t0 * t1 * t1 + (t0 * t0 * t2).scale(Fraction(1, 2))
    assert substitute(i0_poly(TPolicy(3, 4)), {f"t{k}": ZERO for k in range(4)}) == ZERO


def test_i0_against_lagrange_oracle():
    for m, d in [(2, 4), (3, 5), (4, 6), (5, 5)]:
        tp = TPolicy(m, d)
        assert i0_poly(tp) == lagrange_i0(tp)


def test_i0_fixed_point_residual():
    tp = TPolicy(4, 6)
    x = i0_series(tp)
    rhs = sum((x ** n) * Poly.var(f"t{n}").scale(Fraction(1, factorial(n))) for n in range(5))
    assert (x - rhs).poly == ZERO


def test_i_from_t_examples():
    assert i_from_t(1, TPolicy(3, 2)).poly == t1 + t0 * t2
    assert i_from_t(1, TPolicy(3, 4), at_i0_zero=True).poly == t1
    assert substitute(i_poly(2, TPolicy(4, 4)), {"t0": ZERO}) == Poly.var("t2")


def test_i_from_t_is_homogeneous():
    from izansatz.algebra import STANDARD
    for n in range(1, 5):
        assert i_poly(n, TPolicy(5, 5)).weighted_degrees(STANDARD) == {n - 1}


def test_t_from_i_examples():
    i0, i2, i3 = Poly.var("I0"), Poly.var("I2"), Poly.var("I3")
    t = t_from_i(1, 3, 3).poly
    assert t == Poly.var("I1") - i0 * i2 + (i0 * i0 * i3).scale(Fraction(1, 2))
    assert substitute(t_from_i(2, 5, 5).poly, {"I0": ZERO}) == i2
    assert substitute(t_from_i(0, 4, 4).poly, {f"I{k}": ZERO for k in range(5)}) == ZERO


def test_ghost_examples():
    tp = TPolicy(3, 2)
    assert ghost_from_t(1, tp).poly == t0 * t0
    g = ghost_in_i(1, 1)
    i0, i1 = Poly.var("I0"), Poly.var("I1")
    assert g == i0 * i0 - (i1 * i0 * i0).scale(Fraction(1, 2))
    assert substitute(ghost_in_i(2, 4), {"I0": ZERO}) == ZERO
    assert substitute(ghost_from_t(1, TPolicy(3, 4)).poly, {"t0": ZERO}) == ZERO


def test_ghost_derivative_chain():
    # with I0 formal, d I_{-2} / d I0 = I_{-1} term by term
    tp = TPolicy(4, 6)
    assert differentiate(ghost_from_t_formal(2, tp), "I0") == ghost_from_t_formal(1, tp)


def test_ghost_forms_agree():
    tp = TPolicy(4, 6)
    for n in (1, 2, 3):
        assert to_t(ghost_in_i(n, 4, 6), tp) == ghost_from_t(n, tp).poly


def test_roundtrip():
    assert roundtrip_check(TPolicy(4, 5))
    assert roundtrip_check(TPolicy(0, 1))


def test_roundtrip_mutation_fails_at_degree_two():
    bad = roundtrip_residual(TPolicy(4, 5), sign=-1)
    degrees = {sum(e for _, e in mono) for r in bad.values() for mono in r.terms}
    assert degrees and min(degrees) == 2


@given(st.integers(0, 4), st.integers(1, 5))
def test_roundtrip_random_policies(m, d):
    assert roundtrip_check(TPolicy(m, d))
