"""Exact sparse polynomials over the rationals.

Variables are named by strings: ``I2``, ``J3``, ``t0``, ``Im1`` (ghost
coordinate I_{-1}) and the nullary symbols ``v``, ``w``, ``N``, ``tH``,
``zeta``.  Internally every variable is an integer id whose natural order
is the canonical variable order (family rank, then index).

``v`` stands for 1/(1 - I1) and ``w`` for 1/(1 - 3 J1); differentiation
knows dv/dI1 = v^2 and dw/dJ1 = 3 w^2.  ``zeta`` admits half-integer
exponents, stored doubled.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

Rational = Fraction

FAMILY_RANK = {"v": 0, "w": 1, "N": 2, "tH": 3, "I": 4, "J": 5, "t": 6, "Im": 7, "zeta": 8}
NULLARY = ("v", "w", "N", "tH", "zeta")
INDEXED = ("I", "J", "t", "Im")
_RANK_FAMILY = {r: f for f, r in FAMILY_RANK.items()}
_STRIDE = 100000
_NAME_RE = re.compile(r"^(Im|I|J|t)(\d+)$")

UNCOUNTED = frozenset({"v", "w", "N", "tH", "zeta"})


@lru_cache(maxsize=None)
def var_id(name: str) -> int:
    if name in NULLARY:
        return FAMILY_RANK[name] * _STRIDE
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"unknown variable name {name!r}")
    fam, idx = m.group(1), int(m.group(2))
    if fam == "Im" and idx < 1:
        raise ValueError("ghost index must be positive")
    if idx >= _STRIDE:
        raise ValueError("variable index too large")
    return FAMILY_RANK[fam] * _STRIDE + idx


@lru_cache(maxsize=None)
def var_name(vid: int) -> str:
    fam = _RANK_FAMILY[vid // _STRIDE]
    if fam in NULLARY:
        return fam
    return f"{fam}{vid % _STRIDE}"


def family(vid: int) -> str:
    return _RANK_FAMILY[vid // _STRIDE]


def index(vid: int) -> int:
    return vid % _STRIDE


ZETA = var_id("zeta")
V = var_id("v")
W = var_id("w")


def default_weight(vid: int) -> int:
    fam = family(vid)
    if fam in ("I", "J", "t"):
        return index(vid) - 1
    if fam == "Im":
        return -index(vid) - 1
    return 0


@dataclass(frozen=True)
class Grading:
    """Additive weight on variables; the default is wt(X_k) = k - 1."""

    overrides: tuple = ()

    def weight(self, vid: int) -> int:
        for name, wt in self.overrides:
            if var_id(name) == vid:
                return wt
        return default_weight(vid)

    def degree(self, mono) -> int:
        return sum(self.weight(v) * e for v, e in mono if v != ZETA)


STANDARD = Grading()


def q(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


# -- monomials ---------------------------------------------------------------

def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, vb = a[i][0], b[j][0]
        if va < vb:
            out.append(a[i]); i += 1
        elif vb < va:
            out.append(b[j]); j += 1
        else:
            e = a[i][1] + b[j][1]
            if e:
                out.append((va, e))
            i += 1; j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(mono: tuple) -> int:
    """Number of counted variable factors (units and zeta do not count)."""
    d = 0
    for v, e in mono:
        if v // _STRIDE > 3 and v != ZETA:
            d += e
    return d


def mono_from_dict(d: Mapping[str, object]) -> tuple:
    items = []
    for name, e in d.items():
        vid = var_id(name)
        if vid == ZETA:
            e2 = Fraction(e) * 2
            if e2.denominator != 1:
                raise ValueError("zeta exponents must be half-integers")
            e = int(e2)
        else:
            e = Fraction(e)
            if e.denominator != 1:
                raise ValueError(f"fractional exponent on {name}")
            e = int(e)
            if e < 0 and family(vid) not in ("v", "w"):
                raise ValueError(f"negative exponent on {name}")
        if e:
            items.append((vid, e))
    return tuple(sorted(items))


def mono_to_dict(mono: tuple) -> dict:
    out = {}
    for v, e in mono:
        out[var_name(v)] = Fraction(e, 2) if v == ZETA else e
    return out


def _fmt_exp(vid: int, e: int) -> str:
    if vid == ZETA:
        f = Fraction(e, 2)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/2"
    return str(e)


# -- truncation policy -------------------------------------------------------

@dataclass(frozen=True)
class Policy:
    """Truncation rule for formal series.

    A monomial survives when its counted degree is at most ``max_degree``,
    all its variables lie in ``allowed`` (``None`` means unrestricted) and at
    most ``max_probe`` of its factors come from ``probes``.  Both conditions
    cut out ideals, so truncation commutes with ring operations.
    """

    max_degree: int
    allowed: frozenset | None = None
    probes: frozenset = frozenset()
    max_probe: int = 1

    @property
    def _allowed_ids(self):
        return _ids(self.allowed)

    @property
    def _probe_ids(self):
        return _ids(self.probes)

    def admits(self, mono: tuple) -> bool:
        if mono_degree(mono) > self.max_degree:
            return False
        allowed = self._allowed_ids
        probes = self._probe_ids
        n_probe = 0
        for v, e in mono:
            if v // _STRIDE <= 3 or v == ZETA:
                continue
            if v in probes:
                n_probe += e
                continue
            if allowed is not None and v not in allowed:
                return False
        return n_probe <= self.max_probe

    def probe_count(self, mono: tuple) -> int:
        probes = self._probe_ids
        if not probes:
            return 0
        return sum(e for v, e in mono if v in probes)


@lru_cache(maxsize=None)
def _ids(names):
    if names is None:
        return None
    return frozenset(var_id(n) for n in names)


# -- polynomials -------------------------------------------------------------

_IMPLICIT = {
    # unit variable -> (variable it depends on, multiplier c): d(u^e)/dx = c e u^(e+1)
    V: (var_id("I1"), 1),
    W: (var_id("J1"), 3),
}


class Poly:
    """Immutable sparse polynomial; terms map monomial tuples to Fractions."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Fraction] | None = None, _clean=False):
        if terms is None:
            self._terms = {}
        elif _clean:
            self._terms = terms
        else:
            self._terms = {m: q(c) for m, c in terms.items() if c}
        self._hash = None

    # construction
    @classmethod
    def const(cls, c) -> "Poly":
        c = q(c)
        return cls({(): c}, _clean=True) if c else cls()

    @classmethod
    def var(cls, name: str, exp=1) -> "Poly":
        return cls({mono_from_dict({name: exp}): Fraction(1)}, _clean=True)

    @classmethod
    def monomial(cls, coeff, exps: Mapping[str, object]) -> "Poly":
        c = q(coeff)
        return cls({mono_from_dict(exps): c}, _clean=True) if c else cls()

    @classmethod
    def from_terms(cls, items: Iterable) -> "Poly":
        acc: dict = {}
        for coeff, exps in items:
            m = exps if isinstance(exps, tuple) else mono_from_dict(exps)
            acc[m] = acc.get(m, 0) + q(coeff)
        return cls(acc)

    # inspection
    @property
    def terms(self) -> dict:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self, grading: Grading = STANDARD):
        """Terms in canonical graded-lex order."""
        return sorted(self._terms.items(), key=lambda mc: (grading.degree(mc[0]), mc[0]))

    def coeff(self, exps: Mapping[str, object] | tuple = ()) -> Fraction:
        m = exps if isinstance(exps, tuple) else mono_from_dict(exps)
        return self._terms.get(m, Fraction(0))

    def constant(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def variables(self) -> set:
        return {var_name(v) for m in self._terms for v, _ in m}

    def degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=-1)

    def weighted_degrees(self, grading: Grading = STANDARD) -> set:
        return {grading.degree(m) for m in self._terms}

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic
    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            a, b = other, self
        else:
            a, b = self, other
        out = dict(a._terms)
        for m, c in b._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = q(c)
        if not c:
            return Poly()
        return Poly({m: k * c for m, k in self._terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / q(other))
        return NotImplemented

    def __pow__(self, n: int):
        return power(self, n)

    # calculus
    def diff(self, name: str) -> "Poly":
        return differentiate(self, name)

    # display
    def __repr__(self):
        return f"Poly({self.to_text()})"

    def to_text(self, grading: Grading = STANDARD) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items(grading):
            factors = []
            for v, e in m:
                name = var_name(v)
                factors.append(name if e == (2 if v == ZETA else 1) else f"{name}^{_fmt_exp(v, e)}")
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if factors:
                body = "*".join(factors)
                body = body if a == 1 else f"{a}*{body}"
            else:
                body = str(a)
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _lift(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return None


ZERO = Poly()
ONE = Poly.const(1)


def mul(a: Poly, b: Poly, policy: Policy | None = None) -> Poly:
    """Product, optionally truncated by ``policy`` while multiplying."""
    if not a._terms or not b._terms:
        return Poly()
    out: dict = {}
    if policy is None:
        for ma, ca in a._terms.items():
            for mb, cb in b._terms.items():
                m = mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(out, _clean=True)
    dmax = policy.max_degree
    probe_ids = policy._probe_ids
    maxp = policy.max_probe

    def keyed(p):
        rows = []
        for m, c in p._terms.items():
            pc = sum(e for v, e in m if v in probe_ids) if probe_ids else 0
            rows.append((mono_degree(m), pc, m, c))
        rows.sort(key=lambda r: r[0])
        return rows

    ra, rb = keyed(a), keyed(b)
    degs_b = [r[0] for r in rb]
    for da, pa, ma, ca in ra:
        stop = bisect_right(degs_b, dmax - da)
        for k in range(stop):
            _, pb, mb, cb = rb[k]
            if pa + pb > maxp:
                continue
            m = mono_mul(ma, mb)
            s = out.get(m, 0) + ca * cb
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return Poly(out, _clean=True)


def power(p: Poly, n: int, policy: Policy | None = None) -> Poly:
    if n < 0:
        raise ValueError("negative power")
    result = ONE if policy is None else truncate(ONE, policy)
    base = p
    while n:
        if n & 1:
            result = mul(result, base, policy)
        n >>= 1
        if n:
            base = mul(base, base, policy)
    return result


def truncate(p: Poly, policy: Policy) -> Poly:
    return Poly({m: c for m, c in p._terms.items() if policy.admits(m)}, _clean=True)


def differentiate(p: Poly, name: str) -> Poly:
    """Partial derivative, honouring dv/dI1 = v^2 and dw/dJ1 = 3 w^2."""
    x = var_id(name)
    if x == ZETA:
        raise ValueError("differentiation by the spectral variable is not a ring derivation here")
    units = [(u, c) for u, (dep, c) in _IMPLICIT.items() if dep == x]
    out: dict = {}

    def bump(m, c):
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)

    for m, c in p._terms.items():
        for i, (v, e) in enumerate(m):
            if v == x:
                nm = m[:i] + ((v, e - 1),) + m[i + 1:] if e != 1 else m[:i] + m[i + 1:]
                bump(nm, c * e)
            else:
                for u, k in units:
                    if v == u:
                        nm = m[:i] + ((v, e + 1),) + m[i + 1:]
                        bump(nm, c * e * k)
    return Poly(out, _clean=True)


def substitute(p: Poly, mapping: Mapping[str, Poly], policy: Policy | None = None) -> Poly:
    """Replace each variable in ``mapping`` by a polynomial, truncating if asked."""
    ids = {var_id(k): _lift(val) for k, val in mapping.items()}
    cache: dict = {}

    def pw(vid, e):
        key = (vid, e)
        if key not in cache:
            if e == 1:
                cache[key] = ids[vid] if policy is None else truncate(ids[vid], policy)
            else:
                half = pw(vid, e // 2)
                r = mul(half, half, policy)
                if e % 2:
                    r = mul(r, pw(vid, 1), policy)
                cache[key] = r
        return cache[key]

    acc: dict = {}
    for m, c in p._terms.items():
        rest = []
        subs = []
        for v, e in m:
            if v in ids:
                subs.append((v, e))
            else:
                rest.append((v, e))
        term = Poly({tuple(rest): c}, _clean=True)
        if policy is not None:
            term = truncate(term, policy)
        for v, e in subs:
            if not term:
                break
            term = mul(term, pw(v, e), policy)
        for k, val in term._terms.items():
            s = acc.get(k, 0) + val
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    return Poly(acc, _clean=True)


def restrict_zero(p: Poly, names: Iterable[str]) -> Poly:
    """Set the named variables to zero."""
    ids = {var_id(n) for n in names}
    return Poly({m: c for m, c in p._terms.items() if not any(v in ids for v, _ in m)}, _clean=True)


def restrict_families(p: Poly, keep: Callable[[int], bool]) -> Poly:
    """Drop every term containing a variable id rejected by ``keep``."""
    return Poly({m: c for m, c in p._terms.items() if all(keep(v) for v, _ in m)}, _clean=True)


def collect(p: Poly, name: str) -> dict:
    """Split ``p`` by the exponent of one variable: {exponent: coefficient}.

    For ``zeta`` the keys are Fractions (half-integers allowed).
    """
    x = var_id(name)
    out: dict = {}
    for m, c in p._terms.items():
        e = 0
        rest = m
        for i, (v, k) in enumerate(m):
            if v == x:
                e = k
                rest = m[:i] + m[i + 1:]
                break
        key = Fraction(e, 2) if x == ZETA else e
        out.setdefault(key, {})[rest] = c
    return {k: Poly(d, _clean=True) for k, d in out.items()}


def from_collected(parts: Mapping, name: str) -> Poly:
    """Inverse of :func:`collect`."""
    x = var_id(name)
    acc: dict = {}
    for e, coeff in parts.items():
        stored = int(Fraction(e) * 2) if x == ZETA else int(e)
        for m, c in coeff._terms.items():
            nm = mono_mul(m, ((x, stored),)) if stored else m
            acc[nm] = acc.get(nm, 0) + c
    return Poly(acc)


# -- truncated series --------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """A polynomial together with the truncation policy it is exact under."""

    poly: Poly
    policy: Policy = field(compare=True)

    def __post_init__(self):
        object.__setattr__(self, "poly", truncate(self.poly, self.policy))

    def _check(self, other):
        if isinstance(other, TruncatedSeries):
            if other.policy != self.policy:
                raise ValueError("mixing series under different truncation policies")
            return other.poly
        return _lift(other)

    def __add__(self, other):
        return TruncatedSeries(self.poly + self._check(other), self.policy)

    __radd__ = __add__

    def __sub__(self, other):
        return TruncatedSeries(self.poly - self._check(other), self.policy)

    def __neg__(self):
        return TruncatedSeries(-self.poly, self.policy)

    def __mul__(self, other):
        o = self._check(other)
        return TruncatedSeries(mul(self.poly, o, self.policy), self.policy)

    __rmul__ = __mul__

    def __pow__(self, n):
        return TruncatedSeries(power(self.poly, n, self.policy), self.policy)

    def diff(self, name):
        # exact only up to degree D - 1; callers compare with that in mind
        return TruncatedSeries(differentiate(self.poly, name), self.policy)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.policy == other.policy and self.poly == other.poly
        if isinstance(other, Poly):
            return self.poly == truncate(other, self.policy)
        return NotImplemented

    def __hash__(self):
        return hash((self.poly, self.policy))


# -- canonical JSON ----------------------------------------------------------

def to_json_obj(p: Poly, grading: Grading = STANDARD) -> dict:
    terms = []
    for m, c in p.items(grading):
        terms.append({
            "coeff": f"{c.numerator}/{c.denominator}",
            "monomial": {var_name(v): _fmt_exp(v, e) for v, e in m},
        })
    return {"terms": terms}


def from_json_obj(obj: Mapping) -> Poly:
    acc: dict = {}
    for t in obj["terms"]:
        c = Fraction(t["coeff"])
        m = mono_from_dict({k: Fraction(e) for k, e in t["monomial"].items()})
        if m in acc:
            raise ValueError("duplicate monomial in serialized polynomial")
        acc[m] = c
    return Poly(acc)


def reduce_unit(p: Poly, unit: str = "v", var: str = "I1", factor: int = 1) -> Poly:
    """Use unit * (1 - factor*var) = 1 to remove var from terms that carry the unit."""
    u, x = var_id(unit), var_id(var)
    work = dict(p.terms)
    out: dict = {}
    while work:
        m, c = work.popitem()
        eu = ex = 0
        for vid, e in m:
            if vid == u:
                eu = e
            elif vid == x:
                ex = e
        if eu > 0 and ex > 0:
            # x u = (u - 1)/factor
            base = tuple((vid, e - 1 if vid in (u, x) else e) for vid, e in m)
            base = tuple(t for t in base if t[1])
            for nm, nc in ((mono_mul(base, ((u, 1),)), c / factor), (base, -c / factor)):
                s = work.get(nm, 0) + nc
                if s:
                    work[nm] = s
                else:
                    work.pop(nm, None)
        else:
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return Poly(out, _clean=True)
