"""Special deformations of the spectral curves as formal Laurent series.

A curve is stored as ``unit * poly`` where ``poly`` is a polynomial whose
``zeta`` variable is the spectral parameter: either z itself or the shifted
variable z - I0 (``centered``).  For the one-dimensional and matrix-model
curves the unit is sqrt(2); for the Airy-type curve every Gamma factor
pairs with a 1/sqrt(pi), so the unit is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebra import (
    ONE, ZERO, Policy, Poly, collect, differentiate, from_collected, mul, substitute,
)
from .coords import TPolicy, i_to_t, log_unit_series, to_t
from .engine_1d import f0_1d
from .engine_2d import f0_2d
from .engine_hmm import fat_component
from .recursion import dx

ZETA_NAME = "zeta"


@dataclass(frozen=True)
class PiPower:
    """c * pi^(k/2), enough bookkeeping to see sqrt(pi) cancel."""

    c: Fraction
    k: int = 0

    def __mul__(self, other):
        return PiPower(self.c * other.c, self.k + other.k)

    def inverse(self):
        return PiPower(1 / self.c, -self.k)

    def rational(self) -> Fraction:
        if self.k:
            raise ValueError("a sqrt(pi) factor did not cancel")
        return self.c


def gamma_half(x: Fraction) -> PiPower:
    """Gamma at a half-integer, as a multiple of sqrt(pi)."""
    x = Fraction(x)
    if (2 * x).denominator != 1 or (2 * x) % 2 != 1:
        raise ValueError("gamma_half needs a half-integer argument")
    c = Fraction(1)
    y = Fraction(1, 2)
    while y < x:
        c *= y
        y += 1
    while y > x:
        y -= 1
        c /= y
    return PiPower(c, 1)


SQRT_PI = PiPower(Fraction(1), 1)


@dataclass(frozen=True)
class CurveSeries:
    poly: Poly
    centered: bool
    unit: str = "sqrt2"

    def coefficients(self) -> dict:
        return collect(self.poly, ZETA_NAME)

    def window(self, lo, hi) -> dict:
        return {e: c for e, c in self.coefficients().items() if lo <= e <= hi and c}

    def __sub__(self, other):
        if (self.centered, self.unit) != (other.centered, other.unit):
            raise ValueError("curves in different variables or units")
        return CurveSeries(self.poly - other.poly, self.centered, self.unit)


def zeta(e) -> Poly:
    return Poly.var(ZETA_NAME, Fraction(e))


def zeta_derivative(p: Poly) -> Poly:
    parts = collect(p, ZETA_NAME)
    return from_collected({e - 1: c.scale(e) for e, c in parts.items() if e}, ZETA_NAME)


def binom(p: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (p - i)
    return out / factorial(k)


def uncenter(curve: CurveSeries, max_degree: int) -> CurveSeries:
    """Expand (z - I0)^p = z^p sum_k C(p, k) (-I0/z)^k, keeping I0^k for k <= max_degree."""
    if not curve.centered:
        return curve
    i0 = Poly.var("I0")
    pol = Policy(max_degree)
    out = ZERO
    for p, coeff in curve.coefficients().items():
        for k in range(0, max_degree + 1):
            b = binom(p, k)
            if not b:
                break
            term = mul(coeff, (i0 ** k).scale(b * (-1) ** k), pol)
            out = out + term * zeta(p - k)
    return CurveSeries(out, False, curve.unit)


def curve_to_t(curve: CurveSeries, tp: TPolicy) -> CurveSeries:
    flat = uncenter(curve, tp.max_degree)
    parts = {e: i_to_t(c, tp) for e, c in flat.coefficients().items()}
    return CurveSeries(from_collected(parts, ZETA_NAME), False, curve.unit)


# -- one-dimensional gravity and the matrix model ----------------------------

def _charge(model: str) -> Poly:
    return {"1d": ONE, "hmm": Poly.var("N"), "hmm-fat": Poly.var("tH")}[model]


def fat_potential(order: int) -> list:
    """Components tH^{k+1} F_{0,k}, k = 1..order, as (power of tH, Component)."""
    return [(k + 1, fat_component(k)) for k in range(1, order + 1)]


def curve_1d_i(max_index: int, model: str = "1d", fat_order: int = 0) -> CurveSeries:
    """y / sqrt2 = c/zeta + 1/2 sum_n (I_n - delta_{n,1}) zeta^n / n!, c = 1, N or tH.

    For the fat curve the tH-corrections
    zeta^-2 v dX F~ + sum_l (l+1)! zeta^(-l-2) dF~/dI_l are added.
    """
    acc = _charge(model) * zeta(-1)
    for n in range(1, max_index + 1):
        shifted = Poly.var(f"I{n}") - (1 if n == 1 else 0)
        acc = acc + (shifted * zeta(n)).scale(Fraction(1, 2 * factorial(n)))
    if model == "hmm-fat":
        th = Poly.var("tH")
        v = Poly.var("v")
        for power, comp in fat_potential(fat_order):
            w = th ** power
            acc = acc + w * v * dx(comp) * zeta(-2)
            for l in comp.support():
                acc = acc + (w * comp.d(l) * zeta(-l - 2)).scale(factorial(l + 1))
    return CurveSeries(acc, True)


def f0_series(model: str, tp: TPolicy, fat_order: int = 0) -> Poly:
    """Genus-zero free energy of the model as a coupling series."""
    if model == "2d":
        return to_t(f0_2d(tp.top, tp.max_degree), tp)
    base = to_t(f0_1d(tp.max_degree), tp)
    if model == "1d":
        return base
    if model == "hmm":
        return Poly.var("N") * base
    th = Poly.var("tH")
    acc = th * base
    for k in range(1, fat_order + 1):
        if k == 1:
            fk = log_unit_series(tp).scale(Fraction(1, 2))
        else:
            fk = i_to_t(fat_component(k).body, tp)
        acc = acc + (th ** (k + 1)) * fk
    return acc


def curve_1d_t(tp: TPolicy, window: tuple, model: str = "1d", fat_order: int = 0) -> CurveSeries:
    """y / sqrt2 = 1/2 sum (t_n - delta) z^n/n! + c/z + sum_{n>=1} n! z^(-n-1) dF_0/dt_{n-1}."""
    lo, _ = window
    f0 = f0_series(model, tp, fat_order)
    acc = _charge(model) * zeta(-1)
    for n in range(0, tp.max_index + 1):
        shifted = Poly.var(f"t{n}") - (1 if n == 1 else 0)
        acc = acc + (shifted * zeta(n)).scale(Fraction(1, 2 * factorial(n)))
    n = 1
    while -n - 1 >= lo:
        if n - 1 > tp.top:
            raise ValueError("probe range too small for the requested window")
        acc = acc + (differentiate(f0, f"t{n - 1}") * zeta(-n - 1)).scale(factorial(n))
        n += 1
    return CurveSeries(acc, False)


# -- two-dimensional gravity -------------------------------------------------

def _airy_coeff_up(n: int) -> Fraction:
    """-1/(2 sqrt(pi)) (-1)^n Gamma(-n + 1/2) as a rational number."""
    g = gamma_half(Fraction(1, 2) - n)
    return (PiPower(Fraction(-(-1) ** n, 2)) * SQRT_PI.inverse() * g).rational()


def curve_2d_i(max_index: int) -> CurveSeries:
    """y = zeta^(1/2) - 1/(2 sqrt pi) sum_{n>=1} (-1)^n I_n Gamma(-n+1/2) zeta^(n-1/2)."""
    acc = zeta(Fraction(1, 2))
    for n in range(1, max_index + 1):
        acc = acc + (Poly.var(f"I{n}") * zeta(n - Fraction(1, 2))).scale(_airy_coeff_up(n))
    return CurveSeries(acc, True, "1")


def curve_2d_i_unified(max_index: int) -> CurveSeries:
    """y = -(sqrt pi / 2) sum_{n>=1} (I_n - delta_{n,1}) / Gamma(n + 1/2) zeta^(n-1/2)."""
    acc = ZERO
    for n in range(1, max_index + 1):
        c = (PiPower(Fraction(-1, 2)) * SQRT_PI * gamma_half(n + Fraction(1, 2)).inverse()).rational()
        shifted = Poly.var(f"I{n}") - (1 if n == 1 else 0)
        acc = acc + (shifted * zeta(n - Fraction(1, 2))).scale(c)
    return CurveSeries(acc, True, "1")


def curve_2d_t(tp: TPolicy, window: tuple) -> CurveSeries:
    """y = z^(1/2) - 1/(2 sqrt pi) [sum (-1)^n t_n Gamma(-n+1/2) z^(n-1/2)
                                    + sum dF_0/dt_n Gamma(n+3/2) z^(-n-3/2)]."""
    lo, _ = window
    f0 = f0_series("2d", tp)
    acc = zeta(Fraction(1, 2))
    for n in range(0, tp.max_index + 1):
        acc = acc + (Poly.var(f"t{n}") * zeta(n - Fraction(1, 2))).scale(_airy_coeff_up(n))
    n = 0
    while -n - Fraction(3, 2) >= lo:
        if n > tp.top:
            raise ValueError("probe range too small for the requested window")
        c = (PiPower(Fraction(-1, 2)) * SQRT_PI.inverse() * gamma_half(n + Fraction(3, 2))).rational()
        acc = acc + (differentiate(f0, f"t{n}") * zeta(-n - Fraction(3, 2))).scale(c)
        n += 1
    return CurveSeries(acc, False, "1")


# -- action functions --------------------------------------------------------

@dataclass(frozen=True)
class Action:
    """unit * (log_coeff * log(zeta) + series)."""

    log_coeff: Poly
    series: Poly
    unit: str


def action_1d(max_index: int, model: str = "1d") -> Action:
    """S / sqrt2 = c log(zeta) + 1/2 sum (I_n - delta) zeta^(n+1)/(n+1)!, c = 1 or N."""
    acc = ZERO
    for n in range(1, max_index + 1):
        shifted = Poly.var(f"I{n}") - (1 if n == 1 else 0)
        acc = acc + (shifted * zeta(n + 1)).scale(Fraction(1, 2 * factorial(n + 1)))
    return Action(_charge(model), acc, "sqrt2")


def action_2d(max_index: int) -> Action:
    """S = -(sqrt pi / 2) sum (I_n - delta) / Gamma(n + 3/2) zeta^(n+1/2)."""
    acc = ZERO
    for n in range(1, max_index + 1):
        c = (PiPower(Fraction(-1, 2)) * SQRT_PI * gamma_half(n + Fraction(3, 2)).inverse()).rational()
        shifted = Poly.var(f"I{n}") - (1 if n == 1 else 0)
        acc = acc + (shifted * zeta(n + Fraction(1, 2))).scale(c)
    return Action(ZERO, acc, "1")


def _flow(p: Poly, max_index: int) -> Poly:
    """sum_l I_{l+1} d/dI_l on the coefficients."""
    acc = ZERO
    for l in range(1, max_index + 1):
        d = differentiate(p, f"I{l}")
        if d:
            acc = acc + Poly.var(f"I{l + 1}") * d
    return acc


def action_t0_derivative(S: Action, max_index: int) -> CurveSeries:
    """dS/dt_0 = v (d/dI0 + sum I_{l+1} d/dI_l) S at fixed z, as a zeta-series.

    At fixed z, d/dI0 acts on zeta = z - I0 as -d/dzeta.  Terms carrying
    I_{max_index+1} are dropped, matching I_k = 0 beyond the cutoff.
    """
    v = Poly.var("v")
    body = -(S.log_coeff * zeta(-1)) - zeta_derivative(S.series) + _flow(S.series, max_index)
    if _flow(S.log_coeff, max_index):
        raise ValueError("log coefficient must be constant")
    body = Poly({m: c for m, c in body.terms.items()
                 if all(name != f"I{max_index + 1}" for name in Poly({m: 1}).variables())})
    return CurveSeries(v * body, True, S.unit)


def action_zeta_derivative(S: Action) -> CurveSeries:
    return CurveSeries(S.log_coeff * zeta(-1) + zeta_derivative(S.series), True, S.unit)


def restrict_base(curve: CurveSeries) -> CurveSeries:
    """Set I0 = I1 = 0 (so v = 1 and zeta = z)."""
    p = substitute(curve.poly, {"I0": ZERO, "I1": ZERO, "v": ONE})
    return CurveSeries(p, False, curve.unit)


def base_curve(model: str) -> CurveSeries:
    """Curves at zero couplings: sqrt2 (c/z - z/2) and z^(1/2)."""
    if model == "2d":
        return CurveSeries(zeta(Fraction(1, 2)), False, "1")
    return CurveSeries(_charge(model) * zeta(-1) - zeta(1).scale(Fraction(1, 2)), False)
