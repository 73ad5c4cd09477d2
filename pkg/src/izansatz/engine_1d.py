"""One-dimensional gravity: free energies F_g in (v, I_2, ..., I_{2g-1}).

The genus-g constraint for L_m (m >= 1) at I0 = 0 reads

    (m+1)! dt_{m-1} F_{g-1} + sum_{n>=1} (m+n+1)!/n! (I_n - delta_{n,1}) dI_{m+n} F_g = 0

and the dilaton constraint fixes dF_g/dI_1.  Genus one is the seed
dF_1/dI_1 = v/2, i.e. F_1 = 1/2 log(1/(1 - I_1)).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .algebra import ZERO, Poly
from .recursion import I_FRAME, Component, Constraint, dt, solve_component

CONSTRAINT = Constraint(
    lead=lambda m: Fraction(factorial(m + 2)) if m else Fraction(2),
    shift=lambda m, n: Fraction(factorial(m + n + 1), factorial(n)) if m else Fraction(n + 1),
)


@lru_cache(maxsize=None)
def component(g: int) -> Component:
    if g < 1:
        raise ValueError("components are defined for genus >= 1")
    if g == 1:
        return Component(I_FRAME, {1: Poly.var("v").scale(Fraction(1, 2))})
    prev = component(g - 1)

    def source(m):
        return dt(prev, m - 1).scale(factorial(m + 1))

    return solve_component(I_FRAME, CONSTRAINT, 2 * g - 1, 2 * g - 2, source)


def fg_1d(g: int) -> Poly:
    """F_g for g >= 2 as a polynomial in v and I_2..I_{2g-1}."""
    if g < 2:
        raise ValueError("F_0 and F_1 are not polynomials in (v, I); see f0_1d and f1_1d_partials")
    return component(g).body


def fg_1d_partials(g: int) -> dict:
    """{k: dF_g/dI_k}; for g = 1 this is the only representation of F_1."""
    return dict(component(g).partials)


def f0_1d(order: int) -> Poly:
    """Genus-zero free energy sum_k (-1)^k/(k+1)! (I_k + delta_{k,1}) I0^{k+1}.

    Terms with more than ``order`` factors are dropped.
    """
    i0 = Poly.var("I0")
    acc = ZERO
    for k in range(0, order):
        term = Poly.var(f"I{k}") + (1 if k == 1 else 0)
        c = Fraction((-1) ** k, factorial(k + 1))
        for mono, coeff in (term * i0 ** (k + 1)).terms.items():
            if sum(e for _, e in mono) <= order:
                acc = acc + Poly({mono: coeff * c})
    return acc


def f1_1d_text() -> str:
    return "1/2*log(1/(1 - I1))"


def correlators_1d(g: int) -> dict:
    """Intersection-number-like coefficients <prod tau_j^{m_j}>_g.

    F_g = sum <...> prod_j (I_j v^{(j+1)/2})^{m_j} / m_j!
    """
    from .forms import correlators
    return correlators(fg_1d(g), "1d")
