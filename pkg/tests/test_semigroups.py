import math

import numpy as np
import pytest
import sympy as sp
from scipy import integrate

from chernoff_lab.errors import ConfigurationError, DomainError
from chernoff_lab.semigroups import (
    SemigroupOracle,
    gauss_hermite,
    heat_oracle,
    heat_quadrature,
    heat_spectral,
    translate,
    translation_oracle,
)
from chernoff_lab.testfns import const, gaussian, holder_sine, sine


@pytest.mark.parametrize("nodes", [2, 8, 64, 128])
def test_golub_welsch_matches_numpy_hermgauss(nodes):
    x, w = gauss_hermite(nodes)
    xr, wr = np.polynomial.hermite.hermgauss(nodes)
    np.testing.assert_allclose(x, xr, atol=1e-12 * max(1, abs(xr).max()))
    # numpy weights integrate exp(-s^2); ours are normalized by sqrt(pi)
    big = wr > 1e-200
    np.testing.assert_allclose(w[big], wr[big] / math.sqrt(math.pi), rtol=1e-8, atol=1e-15)
    assert w.sum() == pytest.approx(1.0, abs=1e-15)


def test_translate():
    f = sine(1)
    assert translate(f, 0.0, 0.7) == f(0.7)
    assert translate(f, math.pi, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert translate(np.cos, 1.0, 2.0) == math.cos(3.0)
    with pytest.raises(DomainError):
        translate(f, -1.0, 0.0)


def test_translate_group_law_and_isometry():
    f = sine(1)
    x = np.linspace(0, 2 * math.pi, 101)
    s, t = 0.25, 0.5
    np.testing.assert_array_equal(translate(lambda y: translate(f, s, y), t, x), translate(f, s + t, x))
    shifted = np.linspace(-t, 2 * math.pi - t, 101)
    assert np.max(np.abs(translate(f, t, shifted))) == np.max(np.abs(f(x)))


def test_heat_spectral_examples():
    x = np.linspace(-2, 2, 5)
    np.testing.assert_array_equal(heat_spectral(1.0, 1.0, 0.0, x), np.sin(x))
    assert heat_spectral(1.0, 1.0, 1.0, math.pi / 2) == pytest.approx(math.exp(-1), rel=1e-15)
    assert heat_spectral(2.0, 1.0, 1.0, math.pi / 4) == pytest.approx(math.exp(-1) ** 4, rel=1e-14)


def test_heat_quadrature_constant():
    for t in (0.01, 1.0, 10.0):
        assert heat_quadrature(const(3.5), 1.0, t, 0.3) == pytest.approx(3.5, rel=1e-14)


def test_heat_quadrature_matches_spectral():
    x = np.linspace(0, 2 * math.pi, 101)
    got = heat_quadrature(sine(1), 1.0, 1.0, x, nodes=64)
    np.testing.assert_allclose(got, heat_spectral(1.0, 1.0, 1.0, x), atol=1e-10)


def test_gaussian_heat_closed_form_symbolic():
    # independent symbolic oracle for the Poisson integral of a Gaussian
    y, x = sp.symbols("y x", real=True)
    a, t, s = sp.symbols("a t sigma", positive=True)
    kernel = sp.exp(-(x - y) ** 2 / (4 * a ** 2 * t)) / (2 * a * sp.sqrt(sp.pi * t))
    u = sp.integrate(kernel * sp.exp(-y ** 2 / (2 * s ** 2)), (y, -sp.oo, sp.oo))
    expected = s / sp.sqrt(s ** 2 + 2 * a ** 2 * t) * sp.exp(-x ** 2 / (2 * (s ** 2 + 2 * a ** 2 * t)))
    vals = {a: sp.Rational(7, 10), t: sp.Rational(13, 10), s: sp.Rational(3, 2), x: sp.Rational(2, 5)}
    assert float(u.subs(vals)) == pytest.approx(float(expected.subs(vals)), rel=1e-12)
    g = gaussian(1.5)
    assert g.heat_closed_form(0.7, 1.3, 0.4) == pytest.approx(float(expected.subs(vals)), rel=1e-13)


def test_gaussian_quadrature_vs_closed_form():
    g = gaussian(1.0)
    x = np.linspace(-6, 6, 201)
    for t in (0.1, 1.0):
        np.testing.assert_allclose(heat_quadrature(g, 1.0, t, x, 128), g.heat_closed_form(1.0, t, x), atol=1e-10)


def _poisson_by_quad(f, a, t, x, points=None):
    kern = lambda y: math.exp(-(x - y) ** 2 / (4 * a * a * t)) / (2 * a * math.sqrt(math.pi * t))
    val, _ = integrate.quad(lambda y: kern(y) * float(f(y)), x - 40, x + 40, limit=400, points=points)
    return val


def test_heat_quadrature_against_scipy_quad():
    f = gaussian(0.5)
    for x in (0.0, 0.7, -2.0):
        assert heat_quadrature(f, 0.8, 0.3, x, 128) == pytest.approx(_poisson_by_quad(f, 0.8, 0.3, x), abs=1e-12)


def test_heat_quadrature_on_cusp_is_only_roughly_accurate():
    f = holder_sine(1.0)
    ref = _poisson_by_quad(f, 0.8, 0.3, 0.2, points=[0.0, math.pi, -math.pi])
    assert heat_quadrature(f, 0.8, 0.3, 0.2, 128) == pytest.approx(ref, abs=5e-3)


def test_heat_quadrature_semigroup_law():
    f = gaussian(1.0)
    x = np.linspace(-5, 5, 41)
    a, t, s = 1.0, 0.3, 0.5
    two_step = heat_quadrature(lambda y: heat_quadrature(f, a, t, y, 128), a, s, x, 128)
    np.testing.assert_allclose(two_step, heat_quadrature(f, a, t + s, x, 128), atol=1e-8)


@pytest.mark.parametrize("f", [sine(1), gaussian(0.5), holder_sine(0.5)])
def test_heat_quadrature_stays_within_range(f):
    x = np.linspace(-4, 4, 81)
    grid = np.linspace(-50, 50, 200001)
    lo, hi = f(grid).min(), f(grid).max()
    u = heat_quadrature(f, 1.0, 0.5, x, 128)
    assert np.all(u >= lo - 1e-12) and np.all(u <= hi + 1e-12)


def test_heat_quadrature_errors():
    with pytest.raises(DomainError):
        heat_quadrature(sine(1), 1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        heat_quadrature(sine(1), -1.0, 1.0, 0.0)


def test_oracle_validation():
    with pytest.raises(ConfigurationError):
        SemigroupOracle("wave")
    with pytest.raises(ConfigurationError):
        SemigroupOracle("heat_spectral")
    with pytest.raises(ConfigurationError):
        heat_oracle(1.0, "heat_quadrature", nodes=63)
    with pytest.raises(ConfigurationError):
        heat_oracle(1.0).evaluate(holder_sine(0.5), 1.0, 0.0)


def test_oracle_dispatch():
    x = np.array([0.1, 1.0])
    f = sine(1)
    np.testing.assert_array_equal(translation_oracle().evaluate(f, 0.5, x), f(x + 0.5))
    np.testing.assert_allclose(heat_oracle(1.0).evaluate(f, 1.0, x), heat_spectral(1, 1, 1, x))
    np.testing.assert_allclose(heat_oracle(1.0, "heat_quadrature", 128).evaluate(f, 1.0, x),
                               heat_spectral(1, 1, 1, x), atol=1e-12)
