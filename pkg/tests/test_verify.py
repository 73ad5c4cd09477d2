from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given

from izansatz import verify
from izansatz.algebra import ZERO, Poly, differentiate
from izansatz.verify import homogeneity_audit, virasoro_residual, weighted_degree_defects

from conftest import polys

TOP = 9


def test_string_equation_in_couplings():
    reps = virasoro_residual("1d", m_min=-1, m_max=-1, g_max=0, max_index=5, max_degree=6)
    assert len(reps) == 1 and reps[0].passed


def test_2d_dilaton_through_genus_two():
    reps = virasoro_residual("2d", m_min=0, m_max=0, g_max=2, max_index=5, max_degree=5)
    assert [r.g for r in reps] == [0, 1, 2] and all(r.passed for r in reps)


@pytest.mark.parametrize("model", verify.MODELS)
def test_residuals_vanish(model):
    reps = virasoro_residual(model, max_index=5, max_degree=5, **verify.RESIDUAL_PLAN[model])
    bad = [r.summary() for r in reps if not r.passed]
    assert not bad


@pytest.mark.parametrize("model", verify.MODELS)
def test_mutation_is_caught(model):
    reps = virasoro_residual(model, max_index=4, max_degree=4, mutate=True, **verify.RESIDUAL_PLAN[model])
    assert any(not r.passed for r in reps)


def test_report_invariant():
    r = virasoro_residual("1d", m_min=1, m_max=1, g_max=2, max_index=3, max_degree=3)[-1]
    assert r.passed == (not r.residual.poly)
    assert r.summary()["pass"] is True


def test_bad_model_rejected():
    with pytest.raises(ValueError):
        virasoro_residual("3d")


def test_homogeneity():
    assert homogeneity_audit().passed
    planted = homogeneity_audit(plant=True)
    assert not planted.passed and planted.details[0][0] == "1d g=2"
    assert weighted_degree_defects(ZERO, 7, "I") == []


def test_cross_and_coords_suites():
    assert all(r.passed for r in verify.cross_checks())
    assert all(r.passed for r in verify.coords_checks())
    assert not all(r.passed for r in verify.coords_checks(mutate=True))


def test_run_suite_shape():
    out = verify.run_suite("homogeneity")
    assert out["pass"] and list(out["suites"]) == ["homogeneity"]
    with pytest.raises(ValueError):
        verify.run_suite("nope")


def _lm(m: int, p: Poly) -> Poly:
    """First-order part of the 1D operator plus its lambda^2 (m+1)! d_{m-1} term (lambda^2 = N)."""
    acc = ZERO
    for n in range(0, TOP + 1):
        if 0 <= m + n <= TOP:
            s = Poly.var(f"t{n}") - (1 if n == 1 else 0)
            acc = acc + s * differentiate(p, f"t{m + n}").scale(Fraction(factorial(m + n + 1), factorial(n)))
    if m >= 1:
        acc = acc + Poly.var("N") * differentiate(p, f"t{m - 1}").scale(factorial(m + 1))
    return acc


@given(polys(names=["t0", "t1", "t2", "t3", "t4"], max_terms=4))
def test_virasoro_commutators(p):
    for m, k in [(-1, 0), (-1, 1), (0, 1), (1, 2), (-1, 2), (0, 3)]:
        lhs = _lm(m, _lm(k, p)) - _lm(k, _lm(m, p))
        assert lhs == _lm(m + k, p).scale(m - k)
