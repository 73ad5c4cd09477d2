"""Acceptance criteria 1-10, one PASS/FAIL line each.

Tolerances: every comparison is exact rational equality (zero tolerance).
Time limits: 1D tables < 1 s, matrix-model tables < 10 s, fat tower < 10 s,
2D through genus 4 < 60 s, each measured from cold caches.

Criteria 1, 4 and 5 ask for equality with the reference tables exactly as
printed.  Those tables contain a few entries that contradict their own
selection rules (see tables.ERRATA); the literal comparison is reported as
FAIL and kept as a strict xfail, and the corrected comparison is asserted.
"""

import json
import random
import time
from fractions import Fraction
from math import factorial

import pytest

from izansatz import cli, engine_1d, engine_2d, engine_hmm, verify
from izansatz.algebra import Poly, differentiate, from_json_obj, to_json_obj
from izansatz.coords import TPolicy, roundtrip_check, to_t
from izansatz.verify import compare_table, homogeneity_targets, weighted_degree_defects

LIMITS = {"1d": 1.0, "hmm": 10.0, "fat": 10.0, "2d": 60.0}
CASES = 100


@pytest.fixture
def say(capsys):
    def emit(n, ok, text):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}")
    return emit


def cold(*caches):
    for c in caches:
        c.cache_clear()


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def table_reports(keys, use_errata):
    return [compare_table(k, use_errata) for k in keys]


def mismatch_text(reports):
    rows = []
    for r in reports:
        for d in r.details:
            rows.append(f"{r.name}: {d['monomial']} expected {d['expected']} got {d['got']}")
    return "; ".join(rows)


# -- 1 ------------------------------------------------------------------------

KEYS_1D = [("1d", g) for g in (2, 3, 4)]


def test_c1_tables_1d(say):
    cold(engine_1d.component)
    _, secs = timed(lambda: [engine_1d.fg_1d(g) for g in (2, 3, 4)])
    literal = table_reports(KEYS_1D, False)
    fixed = table_reports(KEYS_1D, True)
    lit_ok = all(r.passed for r in literal)
    fixed_ok = all(r.passed for r in fixed)
    say(1, lit_ok and secs < LIMITS["1d"],
        f"1D F2-F4 vs printed tables: {'exact' if lit_ok else 'mismatch ' + mismatch_text(literal)}; "
        f"with errata: {'exact' if fixed_ok else 'mismatch'}; {secs:.3f}s (< {LIMITS['1d']}s)")
    assert fixed_ok and secs < LIMITS["1d"]
    assert len(engine_1d.fg_1d(4)) == 11


@pytest.mark.xfail(strict=True, reason="printed F3 entry has unit exponent 6; homogeneity forces 5")
def test_c1_literal():
    assert all(r.passed for r in table_reports(KEYS_1D, False))


# -- 2 ------------------------------------------------------------------------

KEYS_HMM = [("hmm", 2), ("hmm-tilde", 3), ("hmm-tilde", 4)]


def test_c2_tables_hmm(say):
    cold(engine_hmm.thin_component)
    _, secs = timed(lambda: [engine_hmm.fg_hmm(g) for g in (2, 3, 4)])
    reps = table_reports(KEYS_HMM, False)
    ok = all(r.passed for r in reps) and secs < LIMITS["hmm"]
    say(2, ok, f"thin F2-F4 as N-polynomials vs printed tables: "
               f"{'exact' if all(r.passed for r in reps) else mismatch_text(reps)}; {secs:.3f}s (< {LIMITS['hmm']}s)")
    assert ok


# -- 3 ------------------------------------------------------------------------

def test_c3_n_equals_one(say):
    ok = all(engine_hmm.eval_N(engine_hmm.fg_hmm(g), 1) == engine_1d.fg_1d(g) for g in (2, 3, 4))
    say(3, ok, "F_g^N at N=1 equals F_g^1D for g = 2, 3, 4")
    assert ok


# -- 4 ------------------------------------------------------------------------

KEYS_FAT = [("fat", k) for k in (2, 3, 4)]


def fat_leading(k):
    base = Fraction(1, factorial(k) * factorial(k + 1))
    return engine_hmm.leading_a1(k) == base, engine_hmm.leading_a2(k), base * k * k


def test_c4_fat_tower(say):
    cold(engine_hmm.fat_component)
    _, secs = timed(lambda: [engine_hmm.f0k_fat(k) for k in range(2, 7)])
    seed_ok = engine_hmm.fat_component(1).partials == {1: Poly.var("v").scale(Fraction(1, 2))}
    literal = table_reports(KEYS_FAT, False)
    fixed = table_reports(KEYS_FAT, True)
    a1_ok = all(fat_leading(k)[0] for k in range(2, 7))
    a2_lit = [k for k in range(2, 7) if fat_leading(k)[1] != fat_leading(k)[2]]
    a2_sym = all(fat_leading(k)[1] == fat_leading(k)[2] * (Fraction(1, 2) if k == 2 else 1) for k in range(2, 7))
    lit_ok = all(r.passed for r in literal) and not a2_lit
    say(4, lit_ok and seed_ok and a1_ok and secs < LIMITS["fat"],
        f"F_0,1 seed {'ok' if seed_ok else 'wrong'}; F_0,2-4 vs printed tables: "
        f"{'exact' if all(r.passed for r in literal) else 'mismatch ' + mismatch_text(literal)}; "
        f"with errata: {'exact' if all(r.passed for r in fixed) else 'mismatch'}; "
        f"a1 k<=6 {'ok' if a1_ok else 'wrong'}; a2 as printed fails at k={a2_lit} "
        f"(the I2^2 monomial carries 1/2!), with that factor {'ok' if a2_sym else 'wrong'}; {secs:.3f}s")
    assert seed_ok and a1_ok and a2_sym and all(r.passed for r in fixed) and secs < LIMITS["fat"]


@pytest.mark.xfail(strict=True, reason="printed F_0,3 entry has unit exponent 6; printed a2 misses 1/2! at k=2")
def test_c4_literal():
    assert all(r.passed for r in table_reports(KEYS_FAT, False))
    assert all(fat_leading(k)[1] == fat_leading(k)[2] for k in range(2, 7))


# -- 5 ------------------------------------------------------------------------

KEYS_2D = [("2d-jw", 2), ("2d-tilde", 2), ("2d-tilde", 3), ("2d-tilde", 4)]


def test_c5_tables_2d(say):
    cold(engine_2d.component)
    _, secs = timed(lambda: [engine_2d.fg_2d(g) for g in (2, 3, 4)])
    literal = table_reports(KEYS_2D, False)
    fixed = table_reports(KEYS_2D, True)
    lit_ok = all(r.passed for r in literal)
    fixed_ok = all(r.passed for r in fixed)
    tilde = engine_2d.j_to_i_tilde(4)
    spot = tilde[((10, 1),)] == Fraction(1, 7962624)
    say(5, lit_ok and secs < LIMITS["2d"],
        f"2D F2-F4 in (w,J) and tilde form vs printed tables: "
        f"{'exact' if lit_ok else 'mismatch ' + mismatch_text(literal)}; with errata: "
        f"{'exact' if fixed_ok else 'mismatch'}; I~10 term {'1/7962624' if spot else 'wrong'}; "
        f"{secs:.3f}s (< {LIMITS['2d']}s)")
    assert fixed_ok and spot and secs < LIMITS["2d"]


@pytest.mark.xfail(strict=True, reason="three printed 2D entries contradict the selection rules")
def test_c5_literal():
    assert all(r.passed for r in table_reports(KEYS_2D, False))


# -- 6 ------------------------------------------------------------------------

def test_c6_intersection_numbers(say):
    c = engine_2d.correlators_2d(2)
    t4, t222 = c.get(((4, 1),)), c.get(((2, 3),))
    ok = t4 == Fraction(1, 1152) and t222 == Fraction(7, 240)
    say(6, ok, f"<tau_4>_2 = {t4}, <tau_2^3>_2 = {t222}")
    assert ok


# -- 7 ------------------------------------------------------------------------

def test_c7_coordinates(say):
    rt = roundtrip_check(TPolicy(4, 5))
    m, d = 4, 6
    ref = engine_2d.f0_2d(m, d)
    tp = TPolicy(m, d)
    forms = {
        "ghost": engine_2d.f0_2d_ghost(m, d) == ref,
        "t-form": engine_2d.f0_2d_t_form(tp) == to_t(ref, tp),
        "tilde-ghost": engine_2d.f0_2d_tilde_ghost(m, d) == ref,
    }
    ok = rt and all(forms.values())
    say(7, ok, f"t->I->t roundtrip at (4,5) {'ok' if rt else 'fails'}; "
               f"four F_0 forms at (4,6): " + ", ".join(f"{k} {'ok' if v else 'differs'}" for k, v in forms.items()))
    assert ok


# -- 8 ------------------------------------------------------------------------

def test_c8_virasoro(say):
    start = time.perf_counter()
    counts, bad, caught = {}, [], {}
    for model, plan in verify.RESIDUAL_PLAN.items():
        reps = verify.virasoro_residual(model, max_index=5, max_degree=5, **plan)
        counts[model] = len(reps)
        bad += [r.summary() for r in reps if not r.passed]
        mutant = verify.virasoro_residual(model, max_index=5, max_degree=5, mutate=True, **plan)
        caught[model] = any(not r.passed for r in mutant)
    secs = time.perf_counter() - start
    ok = not bad and all(caught.values())
    say(8, ok, f"residuals at (M,D)=(5,5): {sum(counts.values())} checked "
               f"({', '.join(f'{k} {v}' for k, v in counts.items())}), {len(bad)} nonzero; "
               f"planted F_2 mutation caught in {sum(caught.values())}/{len(caught)} families; {secs:.1f}s")
    assert ok, bad[:3]


# -- 9 ------------------------------------------------------------------------

def test_c9_curves(say):
    reps = verify.curve_checks(max_index=3, max_degree=4, window=(-6, 6))
    ok = all(r.passed for r in reps)
    say(9, ok, "I-form = t-form for 1d, hmm, hmm-fat, 2d over z^-6..z^6 at (3,4); "
               "base curves and -dS/dt0 at I0=I1=0: " + ("exact" if ok else
               "; ".join(f"{r.name}: {r.details[:1]}" for r in reps if not r.passed)))
    assert ok


# -- 10 -----------------------------------------------------------------------

NAMES = ["I0", "I1", "I2", "I3", "t0", "t2", "v", "w", "N", "J2"]


def random_poly(rng: random.Random) -> Poly:
    terms = []
    for _ in range(rng.randint(0, 5)):
        coeff = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
        mono = {rng.choice(NAMES): rng.randint(1, 3) for _ in range(rng.randint(0, 3))}
        terms.append((coeff, mono))
    return Poly.from_terms(terms)


def test_c10_property_suites(say):
    rng = random.Random(20240601)
    results = {}
    ring = 0
    for _ in range(CASES):
        a, b, c = random_poly(rng), random_poly(rng), random_poly(rng)
        ring += ((a + b) + c == a + (b + c) and (a * b) * c == a * (b * c) and a * b == b * a
                 and a * (b + c) == a * b + a * c and a + Poly() == a)
    results["ring laws"] = ring
    leib = 0
    for _ in range(CASES):
        a, b = random_poly(rng), random_poly(rng)
        x = rng.choice(["I0", "I1", "I2", "J1", "t0", "N"])
        leib += differentiate(a * b, x) == differentiate(a, x) * b + a * differentiate(b, x)
    results["Leibniz"] = leib
    targets = homogeneity_targets(4)
    clean = all(not weighted_degree_defects(p, t, fam) for _, p, t, fam in targets)
    planted = 0
    for _ in range(CASES):
        name, p, target, fam = rng.choice(targets)
        k = rng.randint(2, 6)
        junk = Poly.monomial(1, {f"{fam}{k}": 1, fam == "I" and "v" or "w": 1})
        planted += bool(weighted_degree_defects(p + junk, target, fam)) == (k - 1 != target)
    results["homogeneity"] = planted if clean else 0
    det = 0
    for _ in range(CASES):
        a = random_poly(rng)
        s1 = json.dumps(to_json_obj(a), sort_keys=True)
        s2 = json.dumps(to_json_obj(from_json_obj(json.loads(s1))), sort_keys=True)
        det += s1 == s2 and from_json_obj(json.loads(s1)) == a
    results["serialization"] = det
    ok = all(v == CASES for v in results.values())
    say(10, ok, ", ".join(f"{k} {v}/{CASES}" for k, v in results.items())
        + f"; homogeneity audit of {len(targets)} computed F's {'clean' if clean else 'dirty'}")
    assert ok


def test_c10_cli_artifacts_deterministic(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "cache"))
    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert cli.main(["compute", "--model", "2d", "--genus", "3", "--form", "tilde", "--out", str(out)]) == 0
        outs.append((out / "2d-g3-tilde.json").read_bytes())
    assert outs[0] == outs[1]
