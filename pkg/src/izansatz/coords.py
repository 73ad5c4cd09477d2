"""Change of coordinates between couplings t_k and renormalized I_k.

I0 is the fixed point of x = sum_n t_n x^n / n!; the remaining I_n, the
inverse map and the ghost coordinates I_{-n} are finite sums in I0.
All series are truncated by a :class:`TPolicy`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .algebra import (
    ONE, ZERO, Policy, Poly, TruncatedSeries, mul, power, substitute, truncate,
)


@dataclass(frozen=True)
class TPolicy:
    """Couplings t_0..t_M kept to total degree D.

    Couplings with index in (M, probe] may also appear, at most once per
    monomial.  That keeps first derivatives in those directions exact at
    t_{>M} = 0, which is all a residual check needs.
    """

    max_index: int
    max_degree: int
    probe: int | None = None

    def __post_init__(self):
        if self.max_index < 0 or self.max_degree < 0:
            raise ValueError("truncation bounds must be non-negative")
        if self.probe is not None and self.probe < self.max_index:
            raise ValueError("probe index must not be below max_index")

    @property
    def top(self) -> int:
        return self.max_index if self.probe is None else self.probe

    def names(self, fam: str) -> tuple:
        return tuple(f"{fam}{k}" for k in range(self.top + 1))

    def policy(self, fam: str = "t") -> Policy:
        low = frozenset(f"{fam}{k}" for k in range(self.max_index + 1))
        high = frozenset(f"{fam}{k}" for k in range(self.max_index + 1, self.top + 1))
        return Policy(self.max_degree, low, high, 1)

    def low_only(self, p: Poly, fam: str = "t") -> Poly:
        """Set the probe couplings to zero."""
        return truncate(p, Policy(self.max_degree, frozenset(
            f"{fam}{k}" for k in range(self.max_index + 1))))


def _t(k):
    return Poly.var(f"t{k}")


def _inv_fact(k):
    return Fraction(1, factorial(k))


@lru_cache(maxsize=64)
def i0_poly(tp: TPolicy) -> Poly:
    pol = tp.policy()
    x = ZERO
    for _ in range(tp.max_degree + 1):
        # Horner evaluation of sum_n t_n x^n / n!
        acc = _t(tp.top).scale(_inv_fact(tp.top))
        for n in range(tp.top - 1, -1, -1):
            acc = mul(acc, x, pol) + _t(n).scale(_inv_fact(n))
        acc = truncate(acc, pol)
        if acc == x:
            break
        x = acc
    return x


def i0_series(tp: TPolicy) -> TruncatedSeries:
    """I0 as a truncated series in the couplings."""
    return TruncatedSeries(i0_poly(tp), tp.policy())


@lru_cache(maxsize=64)
def _i0_powers(tp: TPolicy) -> tuple:
    pol = tp.policy()
    x = i0_poly(tp)
    pw = [truncate(ONE, pol)]
    for _ in range(tp.top + tp.max_degree + 2):
        pw.append(mul(pw[-1], x, pol))
    return tuple(pw)


@lru_cache(maxsize=512)
def i_poly(n: int, tp: TPolicy) -> Poly:
    if n < 0:
        raise ValueError("use ghost_from_t for negative indices")
    if n == 0:
        return i0_poly(tp)
    pw = _i0_powers(tp)
    pol = tp.policy()
    acc = ZERO
    for k in range(0, tp.top - n + 1):
        if k > tp.max_degree:
            break
        acc = acc + mul(_t(n + k), pw[k], pol).scale(_inv_fact(k))
    return truncate(acc, pol)


def i_from_t(n: int, tp: TPolicy, at_i0_zero: bool = False) -> TruncatedSeries:
    """I_n = sum_k t_{n+k} I0^k / k! as a series in the couplings."""
    if at_i0_zero:
        return TruncatedSeries(_t(n) if n > 0 else ZERO, tp.policy())
    return TruncatedSeries(i_poly(n, tp), tp.policy())


def t_from_i(n: int, max_index: int, max_degree: int, sign: int = 1) -> TruncatedSeries:
    """t_n = sum_k I_{n+k} (-I0)^k / k! in the variables I_0..I_max_index.

    ``sign=-1`` flips the alternating sign; it exists for mutation tests.
    """
    pol = Policy(max_degree, frozenset(f"I{k}" for k in range(max_index + 1)))
    i0 = Poly.var("I0")
    acc = ZERO
    for k in range(0, max_index - n + 1):
        if k + 1 > max_degree:
            break
        c = Fraction((-1) ** k if sign == 1 else 1, factorial(k))
        acc = acc + Poly.var(f"I{n + k}") * power(i0, k).scale(c)
    return TruncatedSeries(acc, pol)


def i_policy(max_index: int, max_degree: int) -> Policy:
    return Policy(max_degree, frozenset(f"I{k}" for k in range(max_index + 1)))


def to_t(p: Poly, tp: TPolicy) -> Poly:
    """Rewrite a polynomial in I_k (k >= 0) as a coupling series."""
    names = {name for name in p.variables() if name.startswith("I") and not name.startswith("Im")}
    mapping = {}
    for name in names:
        k = int(name[1:])
        mapping[name] = i_poly(k, tp) if k <= tp.top else ZERO
    return substitute(p, mapping, tp.policy())


def unit_series(tp: TPolicy) -> Poly:
    """v = 1/(1 - I_1) as a coupling series."""
    i1 = i_poly(1, tp)
    pol = tp.policy()
    acc = truncate(ONE, pol)
    pw = acc
    for _ in range(tp.max_degree):
        pw = mul(pw, i1, pol)
        if not pw:
            break
        acc = acc + pw
    return acc


def log_unit_series(tp: TPolicy) -> Poly:
    """log(1/(1 - I_1)) as a coupling series."""
    i1 = i_poly(1, tp)
    pol = tp.policy()
    acc = ZERO
    pw = truncate(ONE, pol)
    for j in range(1, tp.max_degree + 1):
        pw = mul(pw, i1, pol)
        if not pw:
            break
        acc = acc + pw.scale(Fraction(1, j))
    return acc


def i_to_t(p: Poly, tp: TPolicy) -> Poly:
    """Rewrite a polynomial in v, I_k (and weightless symbols) as a coupling series."""
    p = to_t(p, tp)
    if "v" in p.variables():
        p = substitute(p, {"v": unit_series(tp)}, tp.policy())
    return p


def ghost_from_t_formal(n: int, tp: TPolicy) -> Poly:
    """I_{-n} = sum_k t_k I0^{k+n}/(k+n)! with I0 left as a formal symbol."""
    if n < 1:
        raise ValueError("ghost index must be positive")
    i0 = Poly.var("I0")
    acc = ZERO
    for k in range(0, tp.top + 1):
        acc = acc + _t(k) * power(i0, k + n).scale(_inv_fact(k + n))
    return acc


def ghost_from_t(n: int, tp: TPolicy) -> TruncatedSeries:
    pol = tp.policy()
    formal = truncate(ghost_from_t_formal(n, tp), Policy(tp.max_degree))
    return TruncatedSeries(substitute(formal, {"I0": i0_poly(tp)}, pol), pol)


def ghost_in_i(n: int, max_k: int, max_degree: int | None = None) -> Poly:
    """I_{-n} in renormalized coordinates.

    sum_k I_k (-1)^k I0^{k+n} / (k! (n-1)! (k+n)), with the k = 0 term read
    as I0^{n+1} / n!.
    """
    if n < 1:
        raise ValueError("ghost index must be positive")
    i0 = Poly.var("I0")
    acc = ZERO
    for k in range(0, max_k + 1):
        if max_degree is not None and k + n + 1 > max_degree:
            break
        c = Fraction((-1) ** k, factorial(k) * factorial(n - 1) * (k + n))
        acc = acc + Poly.var(f"I{k}") * power(i0, k + n).scale(c)
    return acc


def vector_field(k: int, at_i0_zero: bool = False) -> dict:
    """d/dt_k as {target: coefficient}; target 'dX' or 'I<l>'.

    d/dt_k = v I0^k/k! dX + sum_{1<=l<=k} I0^{k-l}/(k-l)! d/dI_l, where
    dX = d/dI0 + sum_{l>=1} I_{l+1} d/dI_l.
    """
    i0 = Poly.var("I0")
    v = Poly.var("v")
    out = {}
    if at_i0_zero:
        if k == 0:
            out["dX"] = v
        else:
            out[f"I{k}"] = ONE
        return out
    out["dX"] = v * power(i0, k).scale(_inv_fact(k))
    for l in range(1, k + 1):
        out[f"I{l}"] = power(i0, k - l).scale(_inv_fact(k - l))
    return out


def roundtrip_residual(tp: TPolicy, sign: int = 1) -> dict:
    """t_n(I(t)) - t_n for n <= M; all entries vanish when the maps agree."""
    out = {}
    for n in range(tp.max_index + 1):
        back = t_from_i(n, tp.max_index, tp.max_degree, sign).poly
        res = to_t(back, TPolicy(tp.max_index, tp.max_degree)) - _t(n)
        out[n] = truncate(res, TPolicy(tp.max_index, tp.max_degree).policy())
    return out


def roundtrip_check(tp: TPolicy, sign: int = 1) -> bool:
    return all(r.is_zero() for r in roundtrip_residual(tp, sign).values())
