import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from ballgreen.ballgeom import DimensionContext, bracket, moebius
from ballgreen.kernels import (SingularityError, green, green_gradient, h_kernel, h_kernel_mag,
                               h_split_bound, ide_form, n_kernel, n_kernel_mag, poisson_kernel)

ball3 = arrays(float, 3, elements=st.floats(-0.55, 0.55, allow_nan=False))
C3 = DimensionContext(3)


def _pairs(n, count, seed, sep=0.05):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        x, y = rng.uniform(-0.57, 0.57, (2, n))
        if np.linalg.norm(x - y) > sep:
            out.append((x, y))
    return out


def test_green_examples():
    y = np.array([0.5, 0.0, 0.0])
    assert green(np.zeros(3), y, C3) == pytest.approx(1 / (4 * math.pi), rel=1e-14)
    eta = np.array([0.0, 0.6, 0.8])
    assert abs(green(np.array([0.1, 0.2, 0.3]), eta, C3)) < 1e-15


def test_green_singular():
    x = np.array([0.1, 0.1, 0.1])
    with pytest.raises(SingularityError):
        green(x, x, C3)


@given(ball3, ball3)
def test_green_symmetry(x, y):
    if np.linalg.norm(x - y) < 1e-3:
        return
    assert abs(green(x, y, C3) - green(y, x, C3)) < 1e-13 * max(1.0, abs(green(x, y, C3)))


def test_green_gradient_example():
    g = green_gradient(np.zeros(3), np.array([0.5, 0.0, 0.0]), C3)
    np.testing.assert_allclose(g, [0.2785211504, 0, 0], rtol=1e-9, atol=1e-15)


def test_green_gradient_vanishes_on_boundary():
    g = green_gradient(np.array([0.2, -0.1, 0.3]), np.array([0.6, 0.0, 0.8]), C3)
    np.testing.assert_allclose(g, 0.0, atol=1e-13)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_green_gradient_finite_difference(n):
    ctx = DimensionContext(n)
    h = 1e-5
    for x, y in _pairs(n, 20, n):
        fd = np.array([(green(x + h * e, y, ctx) - green(x - h * e, y, ctx)) / (2 * h) for e in np.eye(n)])
        g = green_gradient(x, y, ctx)
        assert np.linalg.norm(fd - g) <= 1e-6 * np.linalg.norm(g)


def test_n_kernel_examples():
    assert n_kernel_mag(np.zeros(3), np.array([0.5, 0, 0]), C3) == pytest.approx(3.5, rel=1e-14)
    assert n_kernel_mag(np.array([0.1, 0.2, 0.0]), np.array([0.0, 0.0, 1.0]), C3) < 1e-13
    assert h_kernel_mag(np.zeros(3), np.array([0.0, 0.5, 0.0]), C3) == pytest.approx(4.0, rel=1e-14)


@given(ball3, ball3)
def test_ide_chain_matches_kernel(x, y):
    if np.linalg.norm(x - y) < 1e-3:
        return
    z = moebius(x, y)
    want = n_kernel_mag(x, y, C3)
    assert abs(ide_form(x, z, C3) - want) <= 1e-10 * max(1.0, want)


@given(ball3, ball3)
def test_swap_relation(x, y):
    if np.linalg.norm(x - y) < 1e-3:
        return
    np.testing.assert_allclose(h_kernel(x, y, C3), n_kernel(y, x, C3), rtol=1e-13, atol=1e-13)
    assert h_kernel_mag(x, y, C3) <= h_split_bound(x, y, C3) + 1e-13


def test_poisson_kernel_examples():
    eta = np.array([1.0, 0.0, 0.0])
    assert poisson_kernel(np.zeros(3), eta, C3) == pytest.approx(1.0)
    assert poisson_kernel(np.array([0.5, 0.0, 0.0]), eta, C3) == pytest.approx(6.0, rel=1e-14)


def test_kernel_vectorised_over_rows():
    x = np.array([0.1, 0.0, 0.2])
    ys = np.array([[0.5, 0.0, 0.0], [0.0, -0.3, 0.1]])
    vals = n_kernel_mag(x, ys, C3)
    assert vals.shape == (2,)
    assert vals[1] == pytest.approx(n_kernel_mag(x, ys[1], C3))
