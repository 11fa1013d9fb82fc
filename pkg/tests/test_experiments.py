import math

import numpy as np
import pytest

from chernoff_lab import mixture as mx
from chernoff_lab.chernoff import (
    heat_G,
    heat_S,
    inverse_log_rate,
    perturbed_shift,
    power_rate,
    quadratic_shift,
    translation_exact,
)
from chernoff_lab.errors import ConfigurationError, DegenerateFitError, DomainError
from chernoff_lab.experiments import (
    DEFAULT_NS,
    ErrorCurve,
    SamplingDomain,
    default_domain,
    error_curve,
    fit_rate,
    linearity_check,
    slow_convergence_experiment,
    subspace_probe,
    sup_error,
)
from chernoff_lab.semigroups import heat_oracle, translation_oracle
from chernoff_lab.testfns import gaussian, holder_sine, sine

HEAT = heat_oracle(1.0)
TRANS = translation_oracle()


def spectral_error(fam, n, t=1.0, k=1.0, a=1.0):
    lam = mx.charfn(fam(t / n), k).real
    return abs(lam ** n - math.exp(-a * a * k * k * t))


def test_domain_validation():
    with pytest.raises(DomainError):
        SamplingDomain(1.0, 1.0, 10)
    with pytest.raises(DomainError):
        SamplingDomain(0.0, 1.0, 1)
    d = default_domain(sine(1))
    assert (d.x_min, d.x_max, d.points) == (0.0, 2 * math.pi, 2001)
    g = default_domain(gaussian(1), 1.0, 1.0)
    assert g.points == 4001 and g.x_max == pytest.approx(8 * math.sqrt(3) + 1)


@pytest.mark.parametrize("f", [sine(1), gaussian(1), holder_sine(0.5)], ids=lambda f: f.name)
@pytest.mark.parametrize("n", [1, 3, 64])
def test_sup_error_translation_exact(f, n):
    assert sup_error(translation_exact(), TRANS, f, 1.0, n) <= 1e-14 * (1 + f.bound)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 100])
def test_sup_error_heat_G_spectral(n):
    expected = abs((0.5 + 0.5 * math.cos(2 * math.sqrt(1 / n))) ** n - math.exp(-1))
    assert sup_error(heat_G(1), HEAT, sine(1), 1.0, n) == pytest.approx(expected, abs=1e-10)
    assert spectral_error(heat_G(1), n) == pytest.approx(expected, abs=1e-13)


def test_sup_error_quadrature_oracle_agrees():
    quad = heat_oracle(1.0, "heat_quadrature", 128)
    for fam in (heat_G(1), heat_S(1)):
        for f in (sine(1), gaussian(1)):
            assert sup_error(fam, quad, f, 1.0, 50) == pytest.approx(sup_error(fam, HEAT, f, 1.0, 50), abs=1e-9)


def test_sup_error_configuration_errors():
    with pytest.raises(ConfigurationError):
        sup_error(heat_G(1), TRANS, sine(1), 1.0, 4)
    with pytest.raises(ConfigurationError):
        sup_error(translation_exact(), HEAT, sine(1), 1.0, 4)
    with pytest.raises(ConfigurationError):
        sup_error(heat_G(2.0), HEAT, sine(1), 1.0, 4)
    with pytest.raises(DomainError):
        sup_error(heat_G(1), HEAT, sine(1), 0.0, 4)


def test_sup_error_perturbed_shift_lower_bound():
    w = power_rate(0.5)
    fam = perturbed_shift(w)
    t = 2.0
    for n in (16, 64, 256):
        err = sup_error(fam, TRANS, sine(1), t, n)
        # the shifted sine differs by 2 sin(t w(n/t) / 2) in amplitude
        assert err == pytest.approx(2 * math.sin(t * w(n / t) / 2), rel=1e-5)
        assert err >= 0.5 * t * w(n / t)


@pytest.mark.parametrize("fam", [heat_G(1), heat_S(1)], ids=lambda f: f.name)
def test_grid_error_equals_spectral(fam):
    curve = error_curve(fam, HEAT, sine(1), 1.0)
    for n, e in zip(curve.ns, curve.errors):
        assert e == pytest.approx(spectral_error(fam, n), abs=1e-10)


def test_heat_S_curve_decreasing():
    curve = error_curve(heat_S(1), HEAT, sine(1), 1.0)
    assert all(b < a for a, b in zip(curve.errors, curve.errors[1:]))


def test_quadratic_shift_holder_bound():
    f = holder_sine(0.5)
    curve = error_curve(quadratic_shift(1.0), TRANS, f, 1.0)
    for n, e in zip(curve.ns, curve.errors):
        assert e <= f.holder.constant * (1.0 / n) ** 0.5 * (1 + 1e-9)
        # the sup sits on the cusp, where the error is exactly sin(1/n)^alpha
        assert e == pytest.approx(math.sin(1.0 / n) ** 0.5, rel=1e-6)


def test_error_curve_translation_zero():
    curve = error_curve(translation_exact(), TRANS, gaussian(1), 1.0)
    assert max(curve.errors) <= 1e-14 * 2


def test_error_curve_requires_ascending():
    with pytest.raises(DomainError):
        error_curve(heat_G(1), HEAT, sine(1), 1.0, [32, 16])


def test_error_curve_threads_bit_identical(monkeypatch):
    seq = error_curve(heat_S(1), HEAT, gaussian(1), 1.0, DEFAULT_NS[:6], workers=1)
    par = error_curve(heat_S(1), HEAT, gaussian(1), 1.0, DEFAULT_NS[:6], workers=4)
    assert seq.errors == par.errors
    monkeypatch.setenv("CHERNOFF_LAB_THREADS", "3")
    assert error_curve(heat_S(1), HEAT, gaussian(1), 1.0, DEFAULT_NS[:6]).errors == seq.errors
    monkeypatch.setenv("CHERNOFF_LAB_THREADS", "zero")
    with pytest.raises(ConfigurationError):
        error_curve(heat_S(1), HEAT, gaussian(1), 1.0, DEFAULT_NS[:2])


def test_grid_refinement_invariance():
    f = sine(1)
    coarse = SamplingDomain(0.0, 2 * math.pi, 1000)
    fine = SamplingDomain(-1.0, 2 * math.pi + 1.0, 20001)
    for fam, oracle in ((heat_G(1), HEAT), (perturbed_shift(inverse_log_rate()), TRANS)):
        for n in (16, 256):
            a = sup_error(fam, oracle, f, 1.0, n, coarse)
            b = sup_error(fam, oracle, f, 1.0, n, fine)
            assert a == pytest.approx(b, abs=1e-6)


def _synthetic(ns, errors):
    return ErrorCurve(1.0, tuple(ns), tuple(errors))


def test_fit_rate_exact_power_laws():
    ns = [2 ** k for k in range(4, 13)]
    fit = fit_rate(_synthetic(ns, [3 / n for n in ns]))
    assert fit.exponent == pytest.approx(1.0, abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    fit = fit_rate(_synthetic(ns, [5 / n ** 2 for n in ns]))
    assert fit.exponent == pytest.approx(2.0, abs=1e-10)
    assert fit.log_intercept == pytest.approx(math.log(5), abs=1e-9)


def test_fit_rate_cut_and_degenerate():
    ns = [1, 2, 4, 8, 16]
    fit = fit_rate(_synthetic(ns, [1.0, 0.9, 1 / 4, 1 / 8, 1 / 16]), n_min_cut=4)
    assert fit.exponent == pytest.approx(1.0) and fit.points == 3 and fit.n_range == (4, 16)
    with pytest.raises(DegenerateFitError):
        fit_rate(_synthetic(ns, [0.0, 0.0, 0.0, 1e-3, 1e-4]))


def test_fit_rate_heat_G():
    fit = fit_rate(error_curve(heat_G(1), HEAT, sine(1), 1.0))
    assert 0.85 <= fit.exponent <= 1.15


def test_subspace_probe():
    f = holder_sine(0.5)
    fam = quadratic_shift(1.0)
    curves = [error_curve(fam, TRANS, f, t) for t in (0.5, 1.0)]
    assert subspace_probe(curves, power_rate(0.5)).bounded
    assert not subspace_probe(curves, power_rate(1.0)).bounded
    exact = [error_curve(translation_exact(), TRANS, f, t) for t in (0.5, 1.0)]
    v = subspace_probe(exact, power_rate(1.0))
    assert v.bounded and v.sup_ratio == 0.0


def test_subspace_probe_tau_monotone():
    f = holder_sine(0.5)
    fam = quadratic_shift(1.0)
    curves = {t: error_curve(fam, TRANS, f, t) for t in (0.25, 0.5, 1.0)}
    w = power_rate(0.5)
    small = subspace_probe([curves[0.5]], w).sup_ratio
    big = subspace_probe(list(curves.values()), w).sup_ratio
    assert big >= small


def test_subspace_probe_zero_rate():
    curve = _synthetic([1, 2, 3], [1.0, 0.5, 0.2])
    v = subspace_probe([curve], lambda n: 0.0)
    assert not v.bounded and v.sup_ratio == math.inf


def test_subspace_probe_rejects_mismatched_curves():
    with pytest.raises(DomainError):
        subspace_probe([_synthetic([1, 2, 3], [1, 1, 1]), _synthetic([1, 2, 4], [1, 1, 1])], power_rate(1))
    with pytest.raises(DomainError):
        subspace_probe([], power_rate(1))


def test_linearity_trivial_cases():
    ns = (16, 64)
    f, g = sine(1), gaussian(1)
    for alpha, beta in ((1.0, 0.0), (0.5, 0.5)):
        v = linearity_check(heat_G(1), HEAT, f, f if alpha == beta else g, alpha, beta, 1.0, ns)
        assert v <= 1e-14


def test_linearity_random_draws():
    rng = np.random.default_rng(7)
    f, g = sine(1), gaussian(1)
    ns = (16, 128, 1024)
    for _ in range(10):
        alpha, beta = rng.uniform(-10, 10, 2)
        v = linearity_check(heat_G(1), HEAT, f, g, alpha, beta, 1.0, ns)
        ef = max(sup_error(heat_G(1), HEAT, f, 1.0, n) for n in ns)
        eg = max(sup_error(heat_G(1), HEAT, g, 1.0, n) for n in ns)
        assert v <= 1e-10 * (abs(alpha) * ef + abs(beta) * eg + 1)


def test_linearity_holder_functions_share_grid():
    f, g = holder_sine(0.5), holder_sine(1.0)
    v = linearity_check(quadratic_shift(1.0), TRANS, f, g, 3.0, -2.0, 1.0, (16, 256, 4096))
    assert v <= 1e-10 * 6


def test_slow_convergence_inverse_log():
    res = slow_convergence_experiment(inverse_log_rate(), 1.0)
    assert res.holds and res.n0 <= 2 ** 6
    fits = [fit_rate(ErrorCurve(1.0, res.curve.ns[i:i + 3], res.curve.errors[i:i + 3])).exponent
            for i in range(0, len(res.curve.ns) - 2, 2)]
    # local exponent keeps shrinking: slower than any fixed power
    assert all(b < a for a, b in zip(fits, fits[1:]))
    assert fits[-1] < 0.15


def test_slow_convergence_power_rates():
    res = slow_convergence_experiment(power_rate(1.0), 1.0)
    assert res.holds
    res = slow_convergence_experiment(power_rate(0.5), 1.0)
    assert res.holds
    for e, b in zip(res.curve.errors, res.lower_bounds):
        assert b <= e <= 4 * b


def test_slow_convergence_reports_failure():
    # once t w / 2 exceeds 2 the sine amplitude saturates and the bound cannot hold
    w = power_rate(0.5)
    huge = type(w)(lambda x: 1000.0 * x ** -0.5, "1000 x^-1/2")
    res = slow_convergence_experiment(huge, 1.0, (16, 32, 64))
    assert not res.holds and res.n0 is None
