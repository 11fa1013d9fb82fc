"""Convergence-rate harness for Chernoff approximations.

The central quantity is the sup-norm error
``||G(t/n)^n f - e^{tL} f||`` as a function of ``n`` at fixed ``t``,
evaluated on a finite grid that stands in for the real line.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import mixture as mx
from .chernoff import ChernoffFamily, RateFunction, perturbed_shift
from .errors import ConfigurationError, DegenerateFitError, DomainError
from .semigroups import TRANSLATION, SemigroupOracle, translation_oracle
from .testfns import TestFunction, combine, sine

DEFAULT_NS = tuple(2 ** k for k in range(4, 13))
PERIODIC_POINTS = 2001
NONPERIODIC_POINTS = 4001
THREADS_ENV = "CHERNOFF_LAB_THREADS"

# atoms beyond this count are not used as anchor shifts for kink points
_ANCHOR_ATOMS = 16


@dataclass(frozen=True)
class SamplingDomain:
    """Finite uniform grid standing in for the real line."""

    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError("sampling domain needs x_min < x_max")
        if self.points < 2:
            raise DomainError("sampling domain needs at least 2 points")

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)


def default_domain(f: TestFunction, a: float = 0.0, t: float = 0.0) -> SamplingDomain:
    """Grid on which the sup of an error is taken, chosen per function class.

    Periodic functions: one full period, 2001 points. Functions with a
    length scale (Gaussians): eight standard deviations of the heat-evolved
    profile plus the transport distance ``t``, 4001 points.
    """
    if f.period is not None:
        return SamplingDomain(0.0, f.period, PERIODIC_POINTS)
    if f.scale is not None:
        half = 8.0 * math.sqrt(f.scale ** 2 + 2.0 * a * a * t) + abs(t)
        return SamplingDomain(-half, half, NONPERIODIC_POINTS)
    return SamplingDomain(-10.0, 10.0, PERIODIC_POINTS)


@dataclass(frozen=True)
class ErrorCurve:
    t: float
    ns: tuple
    errors: tuple
    family: str = ""
    function: str = ""
    domain: Optional[SamplingDomain] = None
    oracle: str = ""

    def __post_init__(self):
        if len(self.ns) != len(self.errors):
            raise DomainError("ns and errors must have the same length")
        if not all(math.isfinite(e) and e >= 0 for e in self.errors):
            raise DomainError("errors must be finite and non-negative")


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit ``error ~ C n^{-exponent}`` on a log-log scale."""

    exponent: float
    log_intercept: float
    r_squared: float
    n_range: tuple
    points: int


def _check_compatible(fam: ChernoffFamily, oracle: SemigroupOracle):
    if fam.target != oracle.target:
        raise ConfigurationError(
            f"family {fam.name} targets {fam.target!r} but the oracle is {oracle.kind!r}")
    if oracle.target != TRANSLATION and not math.isclose(fam.a, oracle.a, rel_tol=1e-15):
        raise ConfigurationError(
            f"family {fam.name} has a={fam.a} but the oracle has a={oracle.a}")


def _with_anchors(x: np.ndarray, f: TestFunction, domain: SamplingDomain, shifts) -> np.ndarray:
    """Add grid points where ``x + shift`` hits a kink of ``f``.

    The sup of ``|f(x + s1) - f(x + s2)|`` over a Hölder cusp sits where one
    argument lands on the cusp; a uniform grid misses it once the shift
    difference falls below the grid spacing.
    """
    if not f.kinks or not len(shifts):
        return x
    extra = []
    for kink in f.kinks:
        for s in shifts:
            p = kink - s
            if f.period is not None:
                p = domain.x_min + math.fmod(p - domain.x_min, f.period)
                if p < domain.x_min:
                    p += f.period
            if domain.x_min <= p <= domain.x_max:
                extra.append(p)
    if not extra:
        return x
    return np.union1d(x, np.array(extra))


def _eval_points(fam, oracle, f, t, m, domain):
    shifts = list(m.offsets) if len(m) <= _ANCHOR_ATOMS else []
    if oracle.kind == TRANSLATION:
        shifts.append(t)
    return _with_anchors(domain.grid(), f, domain, shifts)


def _sup_error(fam, oracle, f, t, n, domain, x=None) -> float:
    m = mx.power(fam(t / n), n)
    if x is None:
        x = _eval_points(fam, oracle, f, t, m, domain)
    approx = mx.apply(m, f, x)
    exact = np.asarray(oracle.evaluate(f, t, x), dtype=float)
    return float(np.max(np.abs(approx - exact)))


def sup_error(fam: ChernoffFamily, oracle: SemigroupOracle, f: TestFunction, t: float, n: int,
              domain: Optional[SamplingDomain] = None) -> float:
    """``max_x |(G(t/n)^n f)(x) - (e^{tL} f)(x)|`` over the sampling grid."""
    _check_compatible(fam, oracle)
    if not t > 0:
        raise DomainError("t must be positive")
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    if domain is None:
        domain = default_domain(f, fam.a or 0.0, t)
    return _sup_error(fam, oracle, f, t, int(n), domain)


def _workers(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, int(workers))
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def error_curve(fam: ChernoffFamily, oracle: SemigroupOracle, f: TestFunction, t: float,
                ns: Sequence[int] = DEFAULT_NS, domain: Optional[SamplingDomain] = None,
                workers: Optional[int] = None) -> ErrorCurve:
    """Sup-norm errors for each ``n`` in ``ns`` at fixed ``t``.

    Points are independent; with ``workers > 1`` (or ``CHERNOFF_LAB_THREADS``)
    they are evaluated in a thread pool and the result is bit-identical to
    the sequential one.
    """
    ns = tuple(int(n) for n in ns)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("ns must be strictly ascending")
    _check_compatible(fam, oracle)
    if not t > 0:
        raise DomainError("t must be positive")
    if domain is None:
        domain = default_domain(f, fam.a or 0.0, t)

    def one(n):
        return _sup_error(fam, oracle, f, t, n, domain)

    nw = _workers(workers)
    if nw > 1 and len(ns) > 1:
        with ThreadPoolExecutor(max_workers=min(nw, len(ns))) as pool:
            errors = tuple(pool.map(one, ns))
    else:
        errors = tuple(one(n) for n in ns)
    return ErrorCurve(t, ns, errors, fam.name, f.name, domain, oracle.kind)


def fit_rate(curve: ErrorCurve, n_min_cut: int = 0) -> RateFit:
    """Fit ``ln(error) = c - p ln(n)`` on points with ``n >= n_min_cut`` and error > 0.

    Zero errors are discarded, not clamped. Raises
    :class:`DegenerateFitError` when fewer than three points remain, which
    signals an exact family or underflow.
    """
    ns = np.asarray(curve.ns, dtype=float)
    errs = np.asarray(curve.errors, dtype=float)
    keep = (ns >= n_min_cut) & (errs > 0)
    if keep.sum() < 3:
        raise DegenerateFitError(
            f"only {int(keep.sum())} positive errors with n >= {n_min_cut}; need 3")
    lx, ly = np.log(ns[keep]), np.log(errs[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    kept = ns[keep]
    return RateFit(float(-slope), float(intercept), r2, (int(kept[0]), int(kept[-1])), int(keep.sum()))


@dataclass(frozen=True)
class SubspaceVerdict:
    """Heuristic answer to "is the error O(w(n)) uniformly over tau?".

    ``bounded`` holds when the largest ratio ``r(n)/w(n)`` in the last third
    of the ``n`` values is at most twice the median ratio.
    """

    bounded: bool
    sup_ratio: float
    ratios: tuple


def subspace_probe(curves: Sequence[ErrorCurve], w: Callable) -> SubspaceVerdict:
    if not curves:
        raise DomainError("subspace probe needs at least one curve (tau must be non-empty)")
    ns = curves[0].ns
    for c in curves[1:]:
        if c.ns != ns or c.family != curves[0].family or c.function != curves[0].function:
            raise DomainError("curves must share ns, family and test function")
    r = np.max(np.array([c.errors for c in curves], dtype=float), axis=0)
    wn = np.array([float(w(n)) for n in ns])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(r == 0.0, 0.0, r / wn)
    ratios = np.where(np.isnan(ratios), np.inf, ratios)
    sup_ratio = float(np.max(ratios))
    tail = ratios[len(ratios) - math.ceil(len(ratios) / 3):]
    median = float(np.median(ratios))
    bounded = bool(np.all(np.isfinite(ratios)) and np.max(tail) <= 2.0 * median)
    return SubspaceVerdict(bounded, sup_ratio, tuple(float(v) for v in ratios))


def linearity_check(fam: ChernoffFamily, oracle: SemigroupOracle, f: TestFunction, g: TestFunction,
                    alpha: float, beta: float, t: float, ns: Sequence[int] = DEFAULT_NS,
                    domain: Optional[SamplingDomain] = None) -> float:
    """Largest ``err(alpha f + beta g) - |alpha| err(f) - |beta| err(g)`` over ``ns``.

    The triangle inequality makes this non-positive up to roundoff. All
    three errors are taken on the same point set.
    """
    _check_compatible(fam, oracle)
    h = combine(f, g, alpha, beta)
    if domain is None:
        domain = default_domain(h, fam.a or 0.0, t)
    worst = -math.inf
    for n in ns:
        m = mx.power(fam(t / n), n)
        x = _eval_points(fam, oracle, h, t, m, domain)
        eh = _sup_error(fam, oracle, h, t, n, domain, x)
        ef = _sup_error(fam, oracle, f, t, n, domain, x)
        eg = _sup_error(fam, oracle, g, t, n, domain, x)
        worst = max(worst, eh - abs(alpha) * ef - abs(beta) * eg)
    return worst


@dataclass(frozen=True)
class SlowConvergence:
    """Outcome of the lower-bound experiment for a slowly converging shift family.

    ``n0`` is the smallest probed ``n`` beyond which every probed error is at
    least ``t w(n/t) / 2``; ``None`` (with ``holds=False``) if the bound
    fails at the largest probed ``n``.
    """

    n0: Optional[int]
    holds: bool
    curve: ErrorCurve
    lower_bounds: tuple


def slow_convergence_experiment(w: RateFunction, t: float, ns: Sequence[int] = DEFAULT_NS,
                                domain: Optional[SamplingDomain] = None) -> SlowConvergence:
    f = sine(1.0)
    curve = error_curve(perturbed_shift(w), translation_oracle(), f, t, ns, domain)
    bounds = tuple(0.5 * t * float(w(n / t)) for n in curve.ns)
    ok = [e >= b for e, b in zip(curve.errors, bounds)]
    n0 = None
    for i in range(len(ok)):
        if all(ok[i + 1:]) and i < len(ok) - 1:
            n0 = curve.ns[i]
            break
    return SlowConvergence(n0, n0 is not None, curve, bounds)
