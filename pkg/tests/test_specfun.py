import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from ballgreen.specfun import (AngularIntegralParams, DomainError, GammaInequalityCase, Hyp2F1Params,
                               ParameterError, angular_integral, beta_fn, gamma_fn, gamma_inequality_holds,
                               gamma_inequality_le, gauss_2f1, hyp2f1, lgamma_fn, pochhammer)


@pytest.mark.parametrize("x, want", [(1.0, 1.0), (0.5, math.sqrt(math.pi)), (2.5, 0.75 * math.sqrt(math.pi))])
def test_gamma_values(x, want):
    assert gamma_fn(x) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0])
def test_gamma_poles(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


def test_lgamma_large():
    assert lgamma_fn(200.5) == pytest.approx(float(mpmath.loggamma(200.5)), rel=1e-14)


@pytest.mark.parametrize("a, b, want", [(1, 1, 1.0), (0.5, 0.5, math.pi), (1, 0.5, 2.0)])
def test_beta(a, b, want):
    assert beta_fn(a, b) == pytest.approx(want, rel=1e-13)


def test_beta_rejects_nonpositive():
    with pytest.raises(DomainError):
        beta_fn(0.0, 1.0)


@pytest.mark.parametrize("a, n, want", [(7.3, 0, 1.0), (3, 4, 360.0), (1, 5, 120.0)])
def test_pochhammer(a, n, want):
    assert pochhammer(a, n) == want


@given(st.floats(0.1, 20), st.integers(0, 30))
def test_pochhammer_matches_gamma_ratio(a, n):
    assert pochhammer(a, n) == pytest.approx(math.exp(math.lgamma(a + n) - math.lgamma(a)), rel=1e-11)


@pytest.mark.parametrize("a, b, c, t, want", [
    (0.3, 1.7, 2.2, 0.0, 1.0),
    (1.5, 2, 1.5, 0.5, 4.0),
    (1, 1, 2, 0.5, 2 * math.log(2)),
])
def test_2f1_examples(a, b, c, t, want):
    assert gauss_2f1(Hyp2F1Params(a, b, c, t)) == pytest.approx(want, rel=1e-13)


def test_cli_style_value():
    assert f"{hyp2f1(1, 1, 2, 0.5):.10f}" == "1.3862943611"


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 6), st.floats(-0.95, 0.95))
def test_2f1_vs_mpmath(a, b, c, t):
    want = float(mpmath.hyp2f1(a, b, c, t))
    assert hyp2f1(a, b, c, t) == pytest.approx(want, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("t", [0.99, 0.999, -0.99])
def test_2f1_near_unit_argument(t):
    assert hyp2f1(2.0, 1.5, 2.5, t) == pytest.approx(special.hyp2f1(2.0, 1.5, 2.5, t), rel=1e-10)


@pytest.mark.parametrize("bad", [dict(c=0.0), dict(c=-2.0), dict(t=1.0), dict(t=-1.2)])
def test_2f1_rejects(bad):
    kw = dict(a=1.0, b=1.0, c=2.0, t=0.5) | bad
    with pytest.raises((DomainError, ParameterError)):
        Hyp2F1Params(**kw)


def _angular_quad(mu, nu, r):
    f = lambda t: math.sin(t) ** (mu - 1) / (1 + r * r - 2 * r * math.cos(t)) ** nu
    return integrate.quad(f, 0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


@pytest.mark.parametrize("mu, nu, r, want", [(2, 1, 0.0, 2.0), (2, 1, 0.5, math.log(9))])
def test_angular_examples(mu, nu, r, want):
    assert angular_integral(AngularIntegralParams(mu, nu, r)) == pytest.approx(want, rel=1e-12)


def test_angular_n3_oracle():
    got = angular_integral(AngularIntegralParams(2, 2, 0.3))
    assert got == pytest.approx(_angular_quad(2, 2, 0.3), rel=1e-12)


@given(st.floats(1.0, 6.0), st.floats(0.0, 4.0), st.floats(0.0, 0.9))
def test_angular_identity_property(mu, nu, r):
    got = angular_integral(AngularIntegralParams(mu, nu, r))
    assert abs(got - _angular_quad(mu, nu, r)) < 1e-8 * max(1.0, abs(got))


def test_angular_rejects_r_one():
    with pytest.raises(DomainError):
        AngularIntegralParams(2, 1, 1.0)


@pytest.mark.parametrize("m, p, k, sign, ge", [
    (2, 5, 0, True, True),
    (1.5, 4.5, 0.5, True, True),
])
def test_gamma_inequality_examples(m, p, k, sign, ge):
    assert gamma_inequality_holds(GammaInequalityCase(m, p, k)) == (sign, ge)


def test_gamma_inequality_reverse_direction():
    case = GammaInequalityCase(2, 3, 2)
    assert gamma_inequality_holds(case)[0] is False
    assert gamma_inequality_le(case)
    assert gamma_fn(3) * gamma_fn(2) <= gamma_fn(1) * gamma_fn(4)


@given(st.floats(0.1, 8), st.floats(0.1, 8), st.floats(0.0, 1.0))
def test_gamma_inequality_implication(m, extra, frac):
    p = m + extra
    k = frac * p * 0.999
    case = GammaInequalityCase(m, p, k)
    sign, ge = gamma_inequality_holds(case)
    if sign:
        assert ge
    else:
        assert gamma_inequality_le(case)
