"""Shared machinery for solving genus-split Virasoro constraints at I0 = 0.

On the locus I0 = 0 the coupling derivatives become

    d/dt_0 = u dX,   d/dt_k = d/dX_k   (k >= 1),

with u the unit (v or w) and dX = sum_l c_l X_{l+1} d/dX_l.  A free-energy
component of positive genus does not depend on I0, so mixed second
derivatives reduce to the rules in :func:`dt2`.  Each model supplies the
inhomogeneous part of its constraint for L_m; the unknown d F_G / dX_{m+1}
appears linearly through the (t_1 - 1) term and is solved for in
descending order of m, followed by the dilaton equation for X_1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import ZERO, Poly, differentiate


class InconsistentRecursion(RuntimeError):
    """The solved partial derivatives are not those of a single function."""


@dataclass(frozen=True)
class Frame:
    """Coordinate family and its unit; 'I'/'v' or the rescaled 'J'/'w'."""

    var: str
    unit: str

    def x(self, k: int) -> Poly:
        return Poly.var(f"{self.var}{k}")

    def name(self, k: int) -> str:
        return f"{self.var}{k}"

    def dx_weight(self, l: int) -> int:
        return 1 if self.var == "I" else 2 * l + 3

    def lower_weight(self, b: int) -> int:
        return 1 if self.var == "I" else 2 * b + 1

    @property
    def u(self) -> Poly:
        return Poly.var(self.unit)


I_FRAME = Frame("I", "v")
J_FRAME = Frame("J", "w")


class Component:
    """Partial derivatives of one free-energy component in a frame."""

    def __init__(self, frame: Frame, partials: dict, body: Poly | None = None):
        self.frame = frame
        self.partials = {k: p for k, p in partials.items() if p}
        self.body = body
        self._d2 = {}

    def d(self, k: int) -> Poly:
        return self.partials.get(k, ZERO)

    def d2(self, a: int, b: int) -> Poly:
        key = (min(a, b), max(a, b))
        if key not in self._d2:
            self._d2[key] = differentiate(self.d(key[0]), self.frame.name(key[1]))
        return self._d2[key]

    def support(self):
        return sorted(self.partials)


def indices_of(frame: Frame, p: Poly) -> set:
    out = set()
    for name in p.variables():
        if name == frame.unit:
            out.add(1)
        elif name.startswith(frame.var) and name[len(frame.var):].isdigit():
            k = int(name[len(frame.var):])
            if k >= 1:
                out.add(k)
    return out


def dx_poly(frame: Frame, p: Poly) -> Poly:
    acc = ZERO
    for l in sorted(indices_of(frame, p)):
        acc = acc + (frame.x(l + 1) * differentiate(p, frame.name(l))).scale(frame.dx_weight(l))
    return acc


def dx(F: Component) -> Poly:
    fr = F.frame
    acc = ZERO
    for l in F.support():
        acc = acc + (fr.x(l + 1) * F.d(l)).scale(fr.dx_weight(l))
    return acc


def dt(F: Component, k: int) -> Poly:
    if k == 0:
        return F.frame.u * dx(F)
    return F.d(k)


def dt2(F: Component, a: int, b: int) -> Poly:
    a, b = min(a, b), max(a, b)
    fr = F.frame
    u = fr.u
    if a >= 1:
        return F.d2(a, b)
    if b == 0:
        return u * dx_poly(fr, u * dx(F))
    lower = F.d(b - 1) if b >= 2 else u * dx(F)
    return (u * lower).scale(fr.lower_weight(b)) + u * dx_poly(fr, F.d(b))


@dataclass(frozen=True)
class Constraint:
    """Coefficients of the linear part of the genus-split constraints.

    For m >= 1:  d_{m+1} F = u / lead(m) * (source(m) + sum_n shift(m, n) X_n d_{m+n} F)
    For m == 0:  d_1 F     = u / lead(0) * sum_n shift(0, n) X_n d_n F
    """

    lead: Callable[[int], Fraction]
    shift: Callable[[int, int], Fraction]


def solve_component(frame: Frame, cons: Constraint, top: int, weight: int,
                    source: Callable[[int], Poly], extra_checks: int = 1) -> Component:
    """Solve for the partials of a component of total weight ``weight``.

    ``top`` is the largest index X_k the component can depend on.
    """
    u = frame.u
    partials: dict = {}

    def shifted(m):
        acc = ZERO
        for n in range(2, top - m + 1):
            dk = partials.get(m + n)
            if dk:
                acc = acc + (frame.x(n) * dk).scale(cons.shift(m, n))
        return acc

    for k in range(top + extra_checks, 1, -1):
        m = k - 1
        val = (u * (source(m) + shifted(m))).scale(Fraction(1) / cons.lead(m))
        if k > top:
            if val:
                raise InconsistentRecursion(f"nonzero derivative beyond support at X_{k}")
            continue
        if val:
            partials[k] = val
    p1 = (u * shifted(0)).scale(Fraction(1) / cons.lead(0))
    if p1:
        partials[1] = p1
    body = ZERO
    for k, p in partials.items():
        if k >= 2:
            body = body + (frame.x(k) * p).scale(k - 1)
    body = body.scale(Fraction(1, weight))
    for k in range(1, top + 2):
        if differentiate(body, frame.name(k)) != partials.get(k, ZERO):
            raise InconsistentRecursion(f"derivative along X_{k} does not integrate")
    return Component(frame, partials, body)

