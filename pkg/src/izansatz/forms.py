"""Tilde forms, correlator extraction and text/LaTeX rendering."""

from __future__ import annotations

from fractions import Fraction
from math import factorial, prod

from .algebra import Poly, family, index, var_id, var_name


def double_factorial(n: int) -> int:
    """(2k+1)!!-style double factorial; (-1)!! = 0!! = 1."""
    return prod(range(n, 0, -2)) if n > 0 else 1


# convention -> (unit name, coordinate family, unit exponent per X_j, tilde normalisation per X_j)
CONVENTIONS = {
    "1d": ("v", "I", lambda j: Fraction(j + 1, 2), lambda j: 1),
    "factorial": ("v", "I", lambda j: Fraction(j + 1, 2), lambda j: factorial(j + 1)),
    "2d": ("w", "J", lambda j: Fraction(2 * j + 1, 3), lambda j: Fraction(1, double_factorial(2 * j + 1))),
}


class UnitExponentMismatch(ValueError):
    pass


def tilde_form(p: Poly, convention: str) -> dict:
    """Rewrite p in tilde variables; returns {pattern: coefficient Poly}.

    ``pattern`` is a tuple of (j, m_j).  The coefficient may still carry
    weightless symbols such as N.  Each monomial's unit exponent must be the
    one fixed by the convention, otherwise UnitExponentMismatch is raised.
    """
    unit, fam, expo, norm = CONVENTIONS[convention]
    uid = var_id(unit)
    out: dict = {}
    for mono, c in p.terms.items():
        pattern = []
        rest = []
        e_unit = 0
        for vid, e in mono:
            if vid == uid:
                e_unit = e
            elif family(vid) == fam:
                pattern.append((index(vid), e))
            else:
                rest.append((vid, e))
        pattern = tuple(sorted(pattern))
        want = sum((expo(j) * m for j, m in pattern), Fraction(0))
        if want != e_unit:
            raise UnitExponentMismatch(
                f"unit exponent {e_unit} but the tilde form needs {want} for {pattern}")
        scale = prod((Fraction(norm(j)) ** m for j, m in pattern), start=Fraction(1))
        out[pattern] = out.get(pattern, Poly()) + Poly({tuple(rest): c * scale})
    return {k: v for k, v in out.items() if v}


def from_tilde(table: dict, convention: str) -> Poly:
    """Inverse of :func:`tilde_form`."""
    unit, fam, expo, norm = CONVENTIONS[convention]
    acc = Poly()
    for pattern, coeff in table.items():
        coeff = coeff if isinstance(coeff, Poly) else Poly.const(coeff)
        e_unit = sum((expo(j) * m for j, m in pattern), Fraction(0))
        if e_unit.denominator != 1:
            raise UnitExponentMismatch(f"non-integral unit exponent for {pattern}")
        scale = prod((Fraction(norm(j)) ** m for j, m in pattern), start=Fraction(1))
        exps = {f"{fam}{j}": m for j, m in pattern}
        if e_unit:
            exps[unit] = int(e_unit)
        acc = acc + Poly.monomial(1, exps) * coeff.scale(1 / scale)
    return acc


def correlators(p: Poly, convention: str) -> dict:
    """Tilde coefficients multiplied by prod m_j!; keys are patterns."""
    out = {}
    for pattern, coeff in tilde_form(p, convention).items():
        out[pattern] = coeff.scale(prod(factorial(m) for _, m in pattern))
    return out


def j_to_i(p: Poly) -> Poly:
    """Replace J_k by I_k/(2k+1)!! and w by v."""
    acc = {}
    for mono, c in p.terms.items():
        nm = []
        for vid, e in mono:
            fam = family(vid)
            if fam == "J":
                k = index(vid)
                c = c / Fraction(double_factorial(2 * k + 1)) ** e
                nm.append((var_id(f"I{k}"), e))
            elif fam == "w":
                nm.append((var_id("v"), e))
            else:
                nm.append((vid, e))
        m = tuple(sorted(nm))
        acc[m] = acc.get(m, 0) + c
    return Poly(acc)


def pattern_text(pattern, symbol="It") -> str:
    parts = []
    for j, m in pattern:
        parts.append(f"{symbol}{j}" + (f"^{m}" if m != 1 else ""))
    return "*".join(parts) if parts else "1"


def tilde_text(table: dict, symbol="It") -> str:
    keys = sorted(table, key=_pattern_key)
    parts = []
    for pat in keys:
        coeff = table[pat]
        ct = coeff.to_text() if isinstance(coeff, Poly) else str(coeff)
        if isinstance(coeff, Poly) and len(coeff) > 1:
            ct = f"({ct})"
        parts.append(f"{ct}*{pattern_text(pat, symbol)}")
    return " + ".join(parts) if parts else "0"


def _pattern_key(pattern):
    # more factors of low index first, matching the usual table layout
    return (max((j for j, _ in pattern), default=0), tuple(-m for _, m in pattern))


def _latex_coeff(c: Fraction) -> str:
    a = abs(c)
    if a.denominator == 1:
        return str(a.numerator)
    return rf"\frac{{{a.numerator}}}{{{a.denominator}}}"


def _latex_var(name: str, e) -> str:
    if name.startswith("Im"):
        base = f"I_{{-{name[2:]}}}"
    elif name[0] in "IJt" and name[1:].isdigit():
        base = f"{name[0]}_{{{name[1:]}}}"
    elif name == "tH":
        base = r"t_{\mathrm{H}}"
    elif name == "zeta":
        base = r"\zeta"
    else:
        base = name
    return base if e == 1 else f"{base}^{{{e}}}"


def to_latex(p: Poly) -> str:
    """LaTeX rendering with the unit written as a power of 1/(1 - I_1)."""
    if p.is_zero():
        return "0"
    out = []
    for mono, c in p.items():
        num = []
        den = []
        for vid, e in mono:
            name = var_name(vid)
            if name == "v":
                den.append("(1-I_{1})" + (f"^{{{e}}}" if e != 1 else ""))
            elif name == "w":
                den.append("(1-3J_{1})" + (f"^{{{e}}}" if e != 1 else ""))
            else:
                num.append(_latex_var(name, Fraction(e, 2) if name == "zeta" else e))
        sign = "-" if c < 0 else "+"
        a = abs(c)
        top = " ".join(num)
        if den:
            lead = "" if (a == 1 and top) else (_latex_coeff(a) + " ")
            body = rf"{lead}\frac{{{top or '1'}}}{{{' '.join(den)}}}".strip()
        else:
            lead = "" if (a == 1 and top) else _latex_coeff(a)
            body = f"{lead} {top}".strip()
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def tilde_latex(table: dict) -> str:
    """LaTeX for a tilde table {pattern: coefficient}."""
    parts = []
    for pat in sorted(table, key=_pattern_key):
        c = table[pat]
        if isinstance(c, Poly) and not c.variables():
            c = c.constant()
        mono = " ".join(rf"\tilde{{I}}_{{{j}}}" + (f"^{{{m}}}" if m != 1 else "") for j, m in pat)
        if isinstance(c, Poly):
            body = to_latex(c)
            parts.append(("+", rf"\left({body}\right) {mono}".strip()))
            continue
        sign = "-" if c < 0 else "+"
        parts.append((sign, f"{_latex_coeff(c)} {mono}".strip()))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s
