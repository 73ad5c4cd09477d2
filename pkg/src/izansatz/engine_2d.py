"""Two-dimensional topological gravity in the rescaled frame (w, J_k).

J_k = I_k/(2k+1)!! and w = 1/(1 - 3 J_1) = 1/(1 - I_1).  With the
normalized derivatives D_k = (2k+1)!! d/dt_k the genus-g constraint for L_m
at I0 = 0 becomes

    D_{m+1} F_g = w [ sum_{n>=2} (2n+1) J_n D_{m+n} F_g
                      + 1/2 sum_{k+l=m-1} ( D_k D_l F_{g-1}
                                            + sum_{0<g1<g} D_k F_{g1} D_l F_{g-g1} ) ]

and F_1 = 1/24 log(1/(1 - I_1)) enters through D_1 F_1 = w/8.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .algebra import ZERO, Policy, Poly, collect, substitute, truncate
from .coords import ghost_in_i, i0_poly
from .forms import correlators, j_to_i, tilde_form
from .recursion import J_FRAME, Component, Constraint, dt, dt2, solve_component

CONSTRAINT = Constraint(
    lead=lambda m: Fraction(1),
    shift=lambda m, n: Fraction(2 * n + 1),
)


@lru_cache(maxsize=None)
def component(g: int) -> Component:
    if g < 1:
        raise ValueError("components are defined for genus >= 1")
    if g == 1:
        return Component(J_FRAME, {1: Poly.var("w").scale(Fraction(1, 8))})
    prev = component(g - 1)
    pairs = [(component(a), component(g - a)) for a in range(1, g)]

    def source(m):
        acc = ZERO
        for k in range(0, m):
            l = m - 1 - k
            acc = acc + dt2(prev, k, l)
            for fa, fb in pairs:
                left = dt(fa, k)
                if left:
                    right = dt(fb, l)
                    if right:
                        acc = acc + left * right
        return acc.scale(Fraction(1, 2))

    return solve_component(J_FRAME, CONSTRAINT, 3 * g - 2, 3 * g - 3, source)


def fg_2d(g: int) -> Poly:
    """F_g for g >= 2 as a polynomial in w and J_2..J_{3g-2}."""
    if g < 2:
        raise ValueError("F_0 and F_1 are not polynomials in (w, J); see f0_2d and f1_2d_partials")
    return component(g).body


def fg_2d_partials(g: int) -> dict:
    return dict(component(g).partials)


def fg_2d_i(g: int) -> Poly:
    """F_g in (v, I_k)."""
    return j_to_i(fg_2d(g))


def j_to_i_tilde(g: int) -> dict:
    """F_g in I~_j = I_j/(1 - I_1)^{(2j+1)/3}: {pattern: coefficient}."""
    return {pat: c.constant() for pat, c in tilde_form(fg_2d(g), "2d").items()}


def correlators_2d(g: int) -> dict:
    return {pat: c.constant() for pat, c in correlators(fg_2d(g), "2d").items()}


def intersection_number(g: int, pattern) -> Fraction:
    """<prod tau_j^{m_j}>_g with pattern given as {j: m_j}; tau_0 and tau_1 excluded."""
    key = tuple(sorted((int(j), int(m)) for j, m in dict(pattern).items() if m))
    return correlators_2d(g).get(key, Fraction(0))


def euler_2d(p: Poly) -> Poly:
    """E p = sum_{k>=2} (2k+1)/3 I_k dp/dI_k."""
    acc = ZERO
    for name in sorted(p.variables()):
        if name.startswith("I") and name[1:].isdigit() and int(name[1:]) >= 2:
            k = int(name[1:])
            acc = acc + (Poly.var(name) * p.diff(name)).scale(Fraction(2 * k + 1, 3))
    return acc


def ag_expansion(g: int, n_max: int) -> dict:
    """Coefficients a_{g,n} of I_1^n in F_g, from the recursion in n.

    a_{g,1} = E a_{g,0} + delta_{g,1}/24 and
    n a_{g,n} = (n-1) a_{g,n-1} + E a_{g,n-1}.
    """
    if g == 1:
        a0 = ZERO
    else:
        a0 = substitute(fg_2d_i(g), {"v": Poly.const(1)})
    out = {0: a0}
    if n_max >= 1:
        out[1] = euler_2d(a0) + (Fraction(1, 24) if g == 1 else 0)
    for n in range(2, n_max + 1):
        prev = out[n - 1]
        out[n] = (prev.scale(n - 1) + euler_2d(prev)).scale(Fraction(1, n))
    return out


def expand_in_i1(p: Poly, n_max: int, unit: str = "v") -> dict:
    """Coefficients of I_1^n after expanding unit^e = sum_n C(e+n-1, n) I_1^n."""
    out = {n: ZERO for n in range(n_max + 1)}
    for e, coeff in collect(p, unit).items():
        for n in range(n_max + 1):
            c = comb(e + n - 1, n) if e > 0 else (1 if n == 0 else 0)
            if c:
                out[n] = out[n] + coeff.scale(c)
    return out


# -- genus zero --------------------------------------------------------------

def _i(k):
    return Poly.var(f"I{k}")


def _trunc(p: Poly, max_index: int, max_degree: int) -> Poly:
    return truncate(p, Policy(max_degree, frozenset(f"I{k}" for k in range(max_index + 1))))


def f0_2d(max_index: int, max_degree: int) -> Poly:
    """F_0 = I0^3/6 - sum_n (-1)^n I0^{n+2}/(n+2)! I_n
             + 1/2 sum_{n,k} (-1)^{n+k} I0^{n+k+1}/(n! k! (n+k+1)) I_n I_k."""
    i0 = _i(0)
    acc = (i0 ** 3).scale(Fraction(1, 6))
    for n in range(0, max_index + 1):
        if n + 3 > max_degree:
            break
        acc = acc - (_i(n) * i0 ** (n + 2)).scale(Fraction((-1) ** n, factorial(n + 2)))
    for n in range(0, max_index + 1):
        for k in range(0, max_index + 1):
            if n + k + 3 > max_degree:
                continue
            c = Fraction((-1) ** (n + k), 2 * factorial(n) * factorial(k) * (n + k + 1))
            acc = acc + (_i(n) * _i(k) * i0 ** (n + k + 1)).scale(c)
    return _trunc(acc, max_index, max_degree)


def f0_2d_ghost(max_index: int, max_degree: int) -> Poly:
    """F_0 = I0^3/6 + I_{-2} - I0 I_{-1} + 1/2 sum_n (-1)^n I_n I_{-n-1}, ghosts expanded."""
    i0 = _i(0)
    acc = (i0 ** 3).scale(Fraction(1, 6)) + Poly.var("Im2") - i0 * Poly.var("Im1")
    for n in range(0, max_index + 1):
        acc = acc + (_i(n) * Poly.var(f"Im{n + 1}")).scale(Fraction((-1) ** n, 2))
    return _expand_ghosts(acc, max_index, max_degree)


def f0_2d_tilde_ghost(max_index: int, max_degree: int) -> Poly:
    """F_0 = I0^3/6 - 1/2 sum_{n,k} (...) I_n I_k + sum_{n>=1} (-1)^n (I_n - delta_{n,1}) I_{-n-1}."""
    i0 = _i(0)
    acc = (i0 ** 3).scale(Fraction(1, 6))
    for n in range(0, max_index + 1):
        for k in range(0, max_index + 1):
            if n + k + 3 > max_degree:
                continue
            c = Fraction((-1) ** (n + k), 2 * factorial(n) * factorial(k) * (n + k + 1))
            acc = acc - (_i(n) * _i(k) * i0 ** (n + k + 1)).scale(c)
    for n in range(1, max_index + 1):
        shifted = _i(n) - (1 if n == 1 else 0)
        acc = acc + (shifted * Poly.var(f"Im{n + 1}")).scale((-1) ** n)
    return _expand_ghosts(acc, max_index, max_degree)


def _expand_ghosts(p: Poly, max_index: int, max_degree: int) -> Poly:
    ghosts = sorted(n for n in p.variables() if n.startswith("Im"))
    mapping = {name: _trunc(ghost_in_i(int(name[2:]), max_index, max_degree), max_index, max_degree)
               for name in ghosts}
    pol = Policy(max_degree, frozenset(f"I{k}" for k in range(max_index + 1)))
    return substitute(p, mapping, pol)


def f0_2d_t_form(tp) -> Poly:
    """F_0 = I0^3/6 - sum_k I0^{k+2}/(k!(k+2)) t_k + 1/2 sum I0^{n+k+1}/(n!k!(n+k+1)) t_n t_k.

    I0 is the coupling series; the result is a coupling series under ``tp``.
    """
    pol = tp.policy()
    t = [Poly.var(f"t{k}") for k in range(tp.top + 1)]
    i0 = Poly.var("I0")
    acc = (i0 ** 3).scale(Fraction(1, 6))
    for k in range(tp.top + 1):
        if k + 3 > tp.max_degree:
            break
        acc = acc - (t[k] * i0 ** (k + 2)).scale(Fraction(1, factorial(k) * (k + 2)))
    for n in range(tp.top + 1):
        for k in range(tp.top + 1):
            if n + k + 3 > tp.max_degree:
                continue
            acc = acc + (t[n] * t[k] * i0 ** (n + k + 1)).scale(
                Fraction(1, 2 * factorial(n) * factorial(k) * (n + k + 1)))
    return substitute(acc, {"I0": i0_poly(tp)}, pol)


def string_residual(max_index: int, max_degree: int) -> Poly:
    """dF_0/dI0 - 1/2 (sum_n (-1)^n I0^n I_n / n!)^2, truncated; zero when consistent."""
    f0 = f0_2d(max_index, max_degree + 1)
    s = ZERO
    for n in range(max_index + 1):
        s = s + (_i(n) * _i(0) ** n).scale(Fraction((-1) ** n, factorial(n)))
    return _trunc(f0.diff("I0") - (s * s).scale(Fraction(1, 2)), max_index, max_degree)
