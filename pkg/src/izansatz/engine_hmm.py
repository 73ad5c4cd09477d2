"""Hermitian matrix model free energies in renormalized coordinates.

Thin expansion: F^N = sum_g g_s^{g-1} F_g with F_0 = N F_0^{1D} and
F_1 = N^2/2 log(1/(1 - I_1)).  At I0 = 0 the g_s^{G-1} part of L_m Z = 0 is

    2N m! dt_{m-1} F_{G-1} + sum_n (m+n+1)!/n! (I_n - delta_{n,1}) dI_{m+n} F_G
      + sum_{g1+g2=G-1} sum_k k!(m-k)! dt_{k-1} F_{g1} dt_{m-k-1} F_{g2}
      + sum_k k!(m-k)! dt_{k-1} dt_{m-k-1} F_{G-2} + delta_{m,2} delta_{G,2} N v = 0.

Fat expansion: with t_H = N g_s, F_{0,k} is the N^{k+1} part of F_k.  Its
recursion keeps only the terms of top N-degree in the thin one.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .algebra import Poly, ZERO, collect, substitute
from .recursion import I_FRAME, Component, dt, dt2, solve_component
from .engine_1d import CONSTRAINT, f0_1d
from .forms import correlators

N = Poly.var("N")
V = Poly.var("v")


def _quadratic(parts: list, m: int) -> Poly:
    """sum over (F_a, F_b) pairs of sum_k k!(m-k)! dt_{k-1} F_a dt_{m-k-1} F_b."""
    acc = ZERO
    for fa, fb in parts:
        for k in range(1, m):
            left = dt(fa, k - 1)
            if not left:
                continue
            right = dt(fb, m - k - 1)
            if right:
                acc = acc + (left * right).scale(factorial(k) * factorial(m - k))
    return acc


@lru_cache(maxsize=None)
def thin_component(g: int) -> Component:
    if g < 1:
        raise ValueError("components are defined for genus >= 1")
    if g == 1:
        return Component(I_FRAME, {1: (N * N * V).scale(Fraction(1, 2))})
    prev = thin_component(g - 1)
    pairs = [(thin_component(a), thin_component(g - 1 - a)) for a in range(1, g - 1)]
    self_part = thin_component(g - 2) if g - 2 >= 1 else None

    def source(m):
        acc = (N * dt(prev, m - 1)).scale(2 * factorial(m))
        acc = acc + _quadratic(pairs, m)
        if self_part is not None:
            for k in range(1, m):
                acc = acc + dt2(self_part, k - 1, m - k - 1).scale(factorial(k) * factorial(m - k))
        if m == 2 and g == 2:
            acc = acc + N * V
        return acc

    return solve_component(I_FRAME, CONSTRAINT, 2 * g - 1, 2 * g - 2, source)


@lru_cache(maxsize=None)
def fat_component(k: int) -> Component:
    if k < 1:
        raise ValueError("components are defined for order >= 1")
    if k == 1:
        return Component(I_FRAME, {1: V.scale(Fraction(1, 2))})
    prev = fat_component(k - 1)
    pairs = [(fat_component(a), fat_component(k - 1 - a)) for a in range(1, k - 1)]

    def source(m):
        return dt(prev, m - 1).scale(2 * factorial(m)) + _quadratic(pairs, m)

    return solve_component(I_FRAME, CONSTRAINT, 2 * k - 1, 2 * k - 2, source)


def fg_hmm(g: int) -> Poly:
    """F_g for g >= 2 in N, v and I_2..I_{2g-1}."""
    if g < 2:
        raise ValueError("F_0 and F_1 are not polynomials in (v, I); see f0_hmm and f1_hmm_partials")
    return thin_component(g).body


def f1_hmm_partials() -> dict:
    return dict(thin_component(1).partials)


def f0_hmm(order: int) -> Poly:
    return N * f0_1d(order)


def f0k_fat(k: int) -> Poly:
    """F_{0,k} for k >= 2 in v and I_2..I_{2k-1}."""
    if k < 2:
        raise ValueError("F_{0,1} = 1/2 log(1/(1 - I_1)) is not polynomial")
    return fat_component(k).body


def correlators_hmm(g: int) -> dict:
    """<prod tau_j^{m_j}>_g^N as polynomials in N (plain tilde convention)."""
    return correlators(fg_hmm(g), "1d")


def eval_N(p: Poly, n) -> Poly:
    return substitute(p, {"N": Poly.const(n)})


def n_coefficient(p: Poly, power: int) -> Poly:
    return collect(p, "N").get(power, ZERO)


def n_powers(p: Poly) -> set:
    return {e for e, c in collect(p, "N").items() if c}


def leading_a1(k: int) -> Fraction:
    """Coefficient of I_{2k-1} v^k in F_{0,k}."""
    return f0k_fat(k).coeff({f"I{2 * k - 1}": 1, "v": k})


def leading_a2(k: int) -> Fraction:
    """Coefficient of I_2 I_{2k-2} v^{k+1} in F_{0,k}."""
    return f0k_fat(k).coeff(_merge({"I2": 1}, {f"I{2 * k - 2}": 1}, {"v": k + 1}))


def _merge(*ds):
    out: dict = {}
    for d in ds:
        for key, e in d.items():
            out[key] = out.get(key, 0) + e
    return out
