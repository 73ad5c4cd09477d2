"""Independent checks of the engines.

The Virasoro residuals never touch the recursion code: each F_g is turned
into a coupling series and the genus-split L_m operators are applied with
plain t-derivatives.  A residual term is dropped only when its monomial lies
outside the truncation policy; anything that survives is a failure.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import engine_1d, engine_2d, engine_hmm, spectral, tables
from .algebra import (
    ZERO, Poly, TruncatedSeries, collect, differentiate, mono_to_dict, substitute,
)
from .coords import (
    TPolicy, ghost_from_t, ghost_in_i, i_to_t, log_unit_series, roundtrip_check, to_t,
)
from .forms import double_factorial, tilde_form

MODELS = ("1d", "hmm-thin", "hmm-fat", "2d")
SUITES = ("tables", "virasoro", "homogeneity", "cross", "coords", "curves")


@dataclass
class ResidualReport:
    model: str
    m: int
    g: int
    policy: TPolicy
    residual: TruncatedSeries

    @property
    def passed(self) -> bool:
        return not self.residual.poly

    def summary(self) -> dict:
        return {
            "model": self.model, "m": self.m, "g": self.g,
            "policy": [self.policy.max_index, self.policy.max_degree],
            "pass": self.passed,
            "terms": len(self.residual.poly),
            "sample": self.residual.poly.to_text()[:200] if self.residual.poly else "",
        }


@dataclass
class Report:
    name: str
    passed: bool = True
    details: list = field(default_factory=list)

    def fail(self, detail) -> None:
        self.passed = False
        self.details.append(detail)

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "details": [str(d) for d in self.details]}


# -- coupling series of the free energies ------------------------------------

def _dfact(n: int) -> int:
    return 1 if n <= 0 else double_factorial(n)


def _mutated(p: Poly) -> Poly:
    """Add 1 to the coefficient of the first term in canonical order."""
    mono, _ = p.items()[0]
    return p + Poly({mono: 1})


class Series:
    """F_g as coupling series, computed once per (model, genus)."""

    def __init__(self, model: str, tp: TPolicy, mutate: bool = False, fat_order: int = 3):
        self.model = model
        self.tp = tp
        self.mutate = mutate
        self.fat_order = fat_order
        self._f: dict = {}
        self._d: dict = {}

    def f(self, g: int) -> Poly:
        if g < 0:
            return ZERO
        if g not in self._f:
            self._f[g] = self._build(g)
        return self._f[g]

    def d(self, g: int, *ks) -> Poly:
        key = (g,) + ks
        if key not in self._d:
            p = self.f(g)
            for k in ks:
                p = differentiate(p, f"t{k}")
            self._d[key] = p
        return self._d[key]

    def _build(self, g: int) -> Poly:
        tp = self.tp
        model = self.model
        if model == "hmm-fat":
            return self._fat_total() if g == 0 else ZERO
        n = Poly.var("N")
        if g == 0:
            if model == "2d":
                return to_t(engine_2d.f0_2d(tp.top, tp.max_degree), tp)
            base = to_t(engine_1d.f0_1d(tp.max_degree), tp)
            return n * base if model == "hmm-thin" else base
        if g == 1:
            log = log_unit_series(tp)
            if model == "2d":
                return log.scale(Fraction(1, 24))
            if model == "hmm-thin":
                return (n * n * log).scale(Fraction(1, 2))
            return log.scale(Fraction(1, 2))
        if model == "1d":
            body = engine_1d.fg_1d(g)
        elif model == "hmm-thin":
            body = engine_hmm.fg_hmm(g)
        else:
            body = engine_2d.fg_2d_i(g)
        if self.mutate and g == 2:
            body = _mutated(body)
        return i_to_t(body, tp)

    def _fat_total(self) -> Poly:
        tp = self.tp
        th = Poly.var("tH")
        acc = th * to_t(engine_1d.f0_1d(tp.max_degree), tp)
        for k in range(1, self.fat_order + 1):
            if k == 1:
                fk = log_unit_series(tp).scale(Fraction(1, 2))
            else:
                body = engine_hmm.f0k_fat(k)
                if self.mutate and k == 2:
                    body = _mutated(body)
                fk = i_to_t(body, tp)
            acc = acc + th ** (k + 1) * fk
        return acc


def _shifted(n: int) -> Poly:
    return Poly.var(f"t{n}") - (1 if n == 1 else 0)


def _linear(s: Series, g: int, m: int, coeff) -> Poly:
    """sum_{n>=0} coeff(n) (t_n - delta_{n,1}) dF_g/dt_{m+n}; t_n = 0 beyond max_index."""
    acc = ZERO
    for n in range(0, s.tp.max_index + 1):
        if m + n < 0:
            continue
        if m + n > s.tp.top:
            raise ValueError("probe range too small for this constraint")
        d = s.d(g, m + n)
        if d:
            acc = acc + _shifted(n) * d.scale(coeff(n))
    return acc


def _op_1d(s: Series, g: int, m: int) -> Poly:
    t0 = Poly.var("t0")
    if m == -1:
        return (t0 if g == 0 else ZERO) + _linear(s, g, -1, lambda n: 1)
    if m == 0:
        return Poly.const(1 if g == 1 else 0) + _linear(s, g, 0, lambda n: n + 1)
    acc = _linear(s, g, m, lambda n: Fraction(factorial(m + n + 1), factorial(n)))
    if g >= 1:
        acc = acc + s.d(g - 1, m - 1).scale(factorial(m + 1))
    return acc


def _hmm_quadratic(s: Series, g: int, m: int) -> Poly:
    acc = ZERO
    for k in range(1, m):
        c = factorial(k) * factorial(m - k)
        for g1 in range(0, g):
            left = s.d(g1, k - 1)
            if left:
                acc = acc + (left * s.d(g - 1 - g1, m - k - 1)).scale(c)
        if g >= 2:
            acc = acc + s.d(g - 2, k - 1, m - k - 1).scale(c)
    return acc


def _op_hmm(s: Series, g: int, m: int) -> Poly:
    n_ = Poly.var("N")
    t0 = Poly.var("t0")
    if m == -1:
        return (n_ * t0 if g == 0 else ZERO) + _linear(s, g, -1, lambda n: 1)
    if m == 0:
        return (n_ * n_ if g == 1 else ZERO) + _linear(s, g, 0, lambda n: n + 1)
    acc = _linear(s, g, m, lambda n: Fraction(factorial(m + n + 1), factorial(n)))
    if g >= 1:
        acc = acc + (n_ * s.d(g - 1, m - 1)).scale(2 * factorial(m))
    return acc + _hmm_quadratic(s, g, m)


def _op_fat(s: Series, m: int) -> Poly:
    th = Poly.var("tH")
    t0 = Poly.var("t0")
    if m == -1:
        return th * t0 + _linear(s, 0, -1, lambda n: 1)
    if m == 0:
        return th * th + _linear(s, 0, 0, lambda n: n + 1)
    acc = _linear(s, 0, m, lambda n: Fraction(factorial(m + n + 1), factorial(n)))
    if m >= 1:
        acc = acc + (th * s.d(0, m - 1)).scale(2 * factorial(m))
    for k in range(1, m):
        acc = acc + (s.d(0, k - 1) * s.d(0, m - k - 1)).scale(factorial(k) * factorial(m - k))
    return acc


def _op_2d(s: Series, g: int, m: int) -> Poly:
    t0 = Poly.var("t0")
    if m == -1:
        return ((t0 * t0).scale(Fraction(1, 2)) if g == 0 else ZERO) + _linear(s, g, -1, lambda n: 1)
    if m == 0:
        return Poly.const(Fraction(1, 8) if g == 1 else 0) + _linear(s, g, 0, lambda n: 2 * n + 1)
    acc = _linear(s, g, m, lambda n: Fraction(_dfact(2 * n + 2 * m + 1), _dfact(2 * n - 1)))
    quad = ZERO
    for k in range(0, m):
        l = m - 1 - k
        c = _dfact(2 * k + 1) * _dfact(2 * l + 1)
        part = s.d(g - 1, k, l) if g >= 1 else ZERO
        for g1 in range(0, g + 1):
            left = s.d(g1, k)
            if left:
                part = part + left * s.d(g - g1, l)
        quad = quad + part.scale(c)
    return acc + quad.scale(Fraction(1, 2))


def _fat_slice(p: Poly, power: int) -> Poly:
    return collect(p, "tH").get(power, ZERO)


def virasoro_residual(model: str, m_max: int = 4, g_max: int = 3, max_index: int = 5,
                      max_degree: int = 5, mutate: bool = False, m_min: int = -1,
                      fat_order: int = 3) -> list:
    """Genus-split L_m residuals for m_min <= m <= m_max and 0 <= g <= g_max.

    For the fat expansion ``g`` labels the power of tH, from 1 to fat_order + 1.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if m_max - 1 > max_index:
        raise ValueError("need m_max - 1 <= max_index")
    series_tp = TPolicy(max_index, max_degree + 2, max_index + m_max + 1)
    check = TPolicy(max_index, max_degree)
    s = Series(model, series_tp, mutate, fat_order)

    def run(m, g):
        if model == "1d":
            out = _op_1d(s, g, m)
        elif model == "hmm-thin":
            out = _op_hmm(s, g, m)
        elif model == "2d":
            out = _op_2d(s, g, m)
        else:
            out = _fat_slice(_op_fat(s, m), g)
        return ResidualReport(model, m, g, check, TruncatedSeries(check.low_only(out), check.policy()))

    if model == "hmm-fat":
        tasks = [(m, p) for m in range(m_min, m_max + 1) for p in range(1, fat_order + 2)]
    else:
        tasks = [(m, g) for m in range(m_min, m_max + 1) for g in range(0, g_max + 1)]
    return [run(m, g) for m, g in tasks]


# -- tables -------------------------------------------------------------------

def _engine_for(key):
    kind, g = key
    if kind == "1d":
        return engine_1d.fg_1d(g)
    if kind == "fat":
        return engine_hmm.f0k_fat(g)
    if kind in ("hmm", "hmm-tilde"):
        return engine_hmm.fg_hmm(g)
    return engine_2d.fg_2d(g)


def _engine_entries(key) -> dict:
    conv = tables.convention(key)
    body = _engine_for(key)
    if conv is None:
        return {m: c for m, c in body.terms.items()} if key[0] != "hmm" else _n_entries(body)
    return tilde_form(body, conv)


def _n_entries(body: Poly) -> dict:
    """Split an N-polynomial into {monomial without N: N-polynomial}."""
    out: dict = {}
    for e, coeff in collect(body, "N").items():
        for m, c in coeff.terms.items():
            out[m] = out.get(m, ZERO) + Poly.monomial(c, {"N": e})
    return out


def _as_poly(c) -> Poly:
    return c if isinstance(c, Poly) else Poly.const(c)


def _key_text(k, tilde: bool) -> str:
    if tilde:
        return " ".join(f"I~{j}^{m}" for j, m in k)
    return Poly({k: 1}).to_text()


def compare_table(key, use_errata: bool = True, engine: dict | None = None) -> Report:
    report = Report(f"table {key[0]} g={key[1]}")
    expected = tables.entries(key, use_errata)
    got = _engine_entries(key) if engine is None else engine
    tilde = tables.convention(key) is not None
    for k in sorted(set(expected) | set(got), key=repr):
        e = _as_poly(expected.get(k, ZERO))
        o = _as_poly(got.get(k, ZERO))
        if e != o:
            report.fail({"monomial": _key_text(k, tilde), "expected": e.to_text(), "got": o.to_text()})
    return report


def table_check(use_errata: bool = True) -> list:
    reports = [compare_table(key, use_errata) for key in sorted(tables.PRINTED)]
    fat1 = Report("table fat g=1")
    if engine_hmm.fat_component(1).partials != {1: Poly.var("v").scale(Fraction(1, 2))}:
        fat1.fail("dF_{0,1}/dI_1 is not v/2")
    reports.append(fat1)
    return reports


# -- homogeneity ----------------------------------------------------------------

def _weight(name: str, fam: str) -> int | None:
    if name.startswith(fam) and name[len(fam):].isdigit():
        return int(name[len(fam):]) - 1
    return None


def weighted_degree_defects(p: Poly, target: int, fam: str) -> list:
    """Terms whose sum of (k - 1) over fam_k factors differs from target."""
    bad = []
    for mono, c in p.items():
        total = 0
        for name, e in mono_to_dict(mono).items():
            w = _weight(name, fam)
            if w is not None:
                total += w * int(e)
        if total != target:
            bad.append((Poly({mono: c}).to_text(), total, target))
    return bad


def homogeneity_targets(g_max: int = 4) -> list:
    out = []
    for g in range(2, g_max + 1):
        out.append((f"1d g={g}", engine_1d.fg_1d(g), 2 * g - 2, "I"))
        out.append((f"hmm g={g}", engine_hmm.fg_hmm(g), 2 * g - 2, "I"))
        out.append((f"fat k={g}", engine_hmm.f0k_fat(g), 2 * g - 2, "I"))
        out.append((f"2d g={g}", engine_2d.fg_2d(g), 3 * g - 3, "J"))
        out.append((f"2d(I) g={g}", engine_2d.fg_2d_i(g), 3 * g - 3, "I"))
    return out


def homogeneity_audit(g_max: int = 4, plant: bool = False) -> Report:
    report = Report("homogeneity")
    for name, p, target, fam in homogeneity_targets(g_max):
        if plant and name == "1d g=2":
            p = p + Poly.monomial(1, {"I2": 1, "v": 1})
        for bad in weighted_degree_defects(p, target, fam):
            report.fail((name,) + bad)
    return report


# -- cross-model identities -----------------------------------------------------

def cross_checks(g_max: int = 4, k_max: int = 6) -> list:
    collapse = Report("N=1 collapse")
    fat = Report("fat = top N-degree of thin")
    for g in range(2, g_max + 1):
        thin = engine_hmm.fg_hmm(g)
        if engine_hmm.eval_N(thin, 1) != engine_1d.fg_1d(g):
            collapse.fail(f"g={g}")
        if engine_hmm.n_coefficient(thin, g + 1) != engine_hmm.f0k_fat(g):
            fat.fail(f"k={g}")
        if max(engine_hmm.n_powers(thin)) != g + 1:
            fat.fail(f"g={g}: top N power {max(engine_hmm.n_powers(thin))}")
    leading = Report("fat leading coefficients")
    for k in range(2, k_max + 1):
        a1 = Fraction(1, factorial(k) * factorial(k + 1))
        if engine_hmm.leading_a1(k) != a1:
            leading.fail(f"a1 k={k}: {engine_hmm.leading_a1(k)} != {a1}")
        a2 = Fraction(k * k, factorial(k) * factorial(k + 1)) * (Fraction(1, 2) if k == 2 else 1)
        if engine_hmm.leading_a2(k) != a2:
            leading.fail(f"a2 k={k}: {engine_hmm.leading_a2(k)} != {a2}")
    return [collapse, fat, leading]


# -- coordinates and genus zero ------------------------------------------------

def coords_checks(roundtrip=(4, 5), f0=(4, 6), mutate: bool = False) -> list:
    rt = Report("t -> I -> t roundtrip")
    if not roundtrip_check(TPolicy(*roundtrip), -1 if mutate else 1):
        rt.fail(f"roundtrip fails at (M, D) = {roundtrip}")
    m, d = f0
    four = Report("four forms of F_0 (2d)")
    forms = {
        "explicit": engine_2d.f0_2d(m, d),
        "ghost": engine_2d.f0_2d_ghost(m, d),
        "tilde-ghost": engine_2d.f0_2d_tilde_ghost(m, d),
    }
    ref = forms["explicit"]
    for name, p in forms.items():
        if p != ref:
            four.fail(f"{name} differs from explicit form: {(p - ref).to_text()[:200]}")
    tp = TPolicy(m, d)
    if engine_2d.f0_2d_t_form(tp) != to_t(ref, tp):
        four.fail("coupling form differs from explicit form")
    string = Report("genus-zero string equation (2d)")
    if engine_2d.string_residual(m, d - 1):
        string.fail("dF_0/dI0 differs from the square of the string series")
    ghost = Report("ghost coordinates")
    for n in (1, 2, 3):
        direct = ghost_from_t(n, tp).poly
        via_i = to_t(ghost_in_i(n, m, d), tp)
        if direct != via_i:
            ghost.fail(f"I_-{n}: coupling form and renormalized form differ")
    return [rt, four, string, ghost]


# -- spectral curves ------------------------------------------------------------

def _curve_diff(a: spectral.CurveSeries, b: spectral.CurveSeries, window, keep) -> list:
    wa = {e: keep(c) for e, c in a.window(*window).items()}
    wb = {e: keep(c) for e, c in b.window(*window).items()}
    out = []
    for e in sorted(set(wa) | set(wb)):
        diff = wa.get(e, ZERO) - wb.get(e, ZERO)
        if diff:
            out.append(f"zeta^{e}: {diff.to_text()[:160]}")
    return out


def curve_checks(max_index: int = 3, max_degree: int = 4, window=(-6, 6), fat_order: int = 3) -> list:
    lo, _ = window
    probe = max_index + int(-lo)
    low = TPolicy(max_index, max_degree)
    reports = []
    for model in ("1d", "hmm", "hmm-fat", "2d"):
        rep = Report(f"curve {model}: I-form = t-form")
        if model == "2d":
            i_form = spectral.curve_2d_i(max_index)
            t_form = spectral.curve_2d_t(TPolicy(max_index, max_degree + 1, probe), window)
            keep = low.low_only
        else:
            i_form = spectral.curve_1d_i(max_index, model, fat_order)
            t_form = spectral.curve_1d_t(TPolicy(max_index, max_degree + 1, probe), window, model, fat_order)

            def keep(p, _low=low):
                p = _low.low_only(p)
                return Poly({m: c for m, c in p.terms.items()
                             if mono_to_dict(m).get("tH", 0) <= fat_order + 1})
        i_t = spectral.curve_to_t(i_form, TPolicy(max_index, max_degree, probe))
        for d in _curve_diff(i_t, t_form, window, keep):
            rep.fail(d)
        if not any(keep(c) for c in i_t.window(*window).values()):
            rep.fail("window is empty")
        reports.append(rep)

    unified = Report("curve 2d: two I-forms agree")
    if spectral.curve_2d_i(max_index).poly != spectral.curve_2d_i_unified(max_index).poly:
        unified.fail("Gamma-form and shifted form differ")
    reports.append(unified)

    base = Report("base curves and action identity")
    for model in ("1d", "hmm", "2d"):
        if model == "2d":
            i_form = spectral.curve_2d_i(max_index)
            action = spectral.action_2d(max_index)
        else:
            i_form = spectral.curve_1d_i(max_index, model)
            action = spectral.action_1d(max_index)
        star = spectral.base_curve(model)
        at_zero = {f"I{k}": ZERO for k in range(max_index + 1)}
        at_zero["v"] = Poly.const(1)
        if substitute(i_form.poly, at_zero) != star.poly:
            base.fail(f"{model}: curve at zero couplings is not the base curve")
        if model == "hmm":
            continue
        ds = spectral.restrict_base(spectral.action_t0_derivative(action, max_index))
        if ds.poly != -star.poly:
            base.fail(f"{model}: -dS/dt0 at I0 = I1 = 0 is {(-ds.poly).to_text()}")
        if spectral.action_zeta_derivative(action).poly != i_form.poly:
            base.fail(f"{model}: dS/dzeta is not the curve")
    reports.append(base)
    return reports


# -- suites ---------------------------------------------------------------------

RESIDUAL_PLAN = {
    "1d": dict(m_max=4, g_max=3),
    "hmm-thin": dict(m_max=3, g_max=2),
    "hmm-fat": dict(m_max=3, fat_order=3),
    "2d": dict(m_max=3, g_max=2),
}


def virasoro_suite(max_index: int = 5, max_degree: int = 5, mutate: bool = False) -> list:
    def run(model):
        reps = virasoro_residual(model, max_index=max_index, max_degree=max_degree,
                                 mutate=mutate, **RESIDUAL_PLAN[model])
        out = Report(f"virasoro {model}")
        for r in reps:
            if not r.passed:
                out.fail(r.summary())
        out.details.append(f"{len(reps)} residuals checked")
        return out

    with ThreadPoolExecutor() as pool:
        return list(pool.map(run, list(RESIDUAL_PLAN)))


def _table_suite(mutate: bool) -> list:
    reports = table_check()
    if mutate:
        key = ("1d", 2)
        got = _engine_entries(key)
        mono = sorted(got, key=repr)[0]
        got[mono] = got[mono] + 1
        reports.append(compare_table(key, engine=got))
    return reports


def run_suite(name: str = "all", mutate: bool = False) -> dict:
    """Run one suite (or all) and return a JSON-ready report.

    ``mutate`` plants a deliberate error in the tables, virasoro,
    homogeneity and coords suites so the harness can be seen to fail.
    """
    names = SUITES if name == "all" else (name,)
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {name!r}")
    out = {"suites": {}, "pass": True}
    for n in names:
        start = time.perf_counter()
        if n == "tables":
            reps = _table_suite(mutate)
        elif n == "virasoro":
            reps = virasoro_suite(mutate=mutate)
        elif n == "homogeneity":
            reps = [homogeneity_audit(plant=mutate)]
        elif n == "cross":
            reps = cross_checks()
        elif n == "coords":
            reps = coords_checks(mutate=mutate)
        else:
            reps = curve_checks()
        ok = all(r.passed for r in reps)
        out["suites"][n] = {
            "pass": ok,
            "seconds": round(time.perf_counter() - start, 3),
            "reports": [r.as_dict() for r in reps],
        }
        out["pass"] = out["pass"] and ok
    return out


def summary_lines(result: dict) -> list:
    lines = []
    for n, s in result["suites"].items():
        lines.append(f"[{'PASS' if s['pass'] else 'FAIL'}] {n} ({s['seconds']}s)")
        for r in s["reports"]:
            if not r["pass"]:
                lines.append(f"    {r['name']}: " + "; ".join(r["details"][:3]))
    return lines


__all__ = [
    "ResidualReport", "Report", "virasoro_residual", "table_check", "compare_table",
    "homogeneity_audit", "weighted_degree_defects", "cross_checks", "coords_checks",
    "curve_checks", "run_suite", "summary_lines",
]
