"""Chernoff-function families as maps ``t -> ShiftMixture`` and numeric certifiers.

The certifiers probe the hypotheses of the Chernoff theorem on concrete
families: tangency ``(G(t)f - f)/t -> Lf``, the norm bound
``||G(t)|| <= exp(omega t)``, and how many moments of ``G(t)`` agree with
those of the heat kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from . import mixture as mx
from .errors import ConstructionError, DomainError
from .mixture import ShiftMixture
from .semigroups import TRANSLATION

HEAT = "heat"

MOMENT_RTOL = 1e-9


@dataclass(frozen=True)
class RateFunction:
    """A decay profile ``w: [1, inf) -> [0, inf)`` with ``w(x) -> 0``.

    Decay is certified by sampling at ``x = 10^1 .. 10^8``: all samples
    finite and non-negative, the last four non-increasing, and the value at
    ``10^8`` below ``eps``.
    """

    w: Callable[[float], float]
    description: str
    eps: float = 0.1

    def __post_init__(self):
        xs = [10.0 ** k for k in range(1, 9)]
        vals = [float(self.w(x)) for x in xs]
        if not all(math.isfinite(v) and v >= 0 for v in vals):
            raise ConstructionError(f"rate function {self.description!r} must be finite and >= 0")
        tail = vals[-4:]
        if any(b > a for a, b in zip(tail, tail[1:])) or tail[-1] > self.eps:
            raise ConstructionError(f"rate function {self.description!r} does not decay to 0")

    def __call__(self, x):
        return self.w(x)


def zero_rate() -> RateFunction:
    return RateFunction(lambda x: 0.0 * np.asarray(x, dtype=float), "0")


def inverse_log_rate() -> RateFunction:
    """``1/ln(e + x)``: slower than every power of ``1/x``."""
    return RateFunction(lambda x: 1.0 / np.log(math.e + np.asarray(x, dtype=float)), "1/ln(e+x)")


def power_rate(p: float) -> RateFunction:
    if not p > 0:
        raise ConstructionError("power rate needs p > 0")
    return RateFunction(lambda x: np.asarray(x, dtype=float) ** (-p), f"x^-{p:g}")


RATE_CATALOG = {
    "zero": (zero_rate, "zero  w(x) = 0"),
    "inv_log": (inverse_log_rate, "inv_log  w(x) = 1/ln(e+x)"),
    "power": (power_rate, "power:p  w(x) = x^-p"),
}


def parse_rate(spec: str) -> RateFunction:
    name, _, arg = spec.strip().partition(":")
    if name not in RATE_CATALOG:
        raise ConstructionError(f"unknown rate function {name!r}; catalog: {', '.join(RATE_CATALOG)}")
    factory = RATE_CATALOG[name][0]
    if not arg:
        return factory()
    try:
        return factory(float(arg))
    except ValueError:
        raise ConstructionError(f"bad parameter {arg!r} in rate spec {spec!r}") from None


@dataclass(frozen=True)
class ChernoffFamily:
    """Operator family ``t -> G(t)`` realized as shift mixtures.

    ``target`` names the semigroup the family approximates (``"translation"``
    or ``"heat"``); heat families carry the diffusion coefficient in
    ``params["a"]``.
    """

    name: str
    build: Callable[[float], ShiftMixture]
    target: str
    params: Mapping[str, object] = field(default_factory=dict)

    def __call__(self, t: float) -> ShiftMixture:
        if t < 0:
            raise DomainError("Chernoff functions are defined for t >= 0")
        return self.build(float(t))

    @property
    def a(self) -> Optional[float]:
        return self.params.get("a")


def translation_exact() -> ChernoffFamily:
    """``G(t) = e^{tL}`` for ``L = d/dx``: a single shift by ``t``."""
    return ChernoffFamily("translation_exact", lambda t: mx.make([(t, 1.0)]), TRANSLATION)


def perturbed_shift(w: RateFunction) -> ChernoffFamily:
    """Shift by ``t + t w(1/t)``; converges no faster than ``w``."""

    def build(t):
        if t == 0:
            return mx.IDENTITY
        wv = float(w(1.0 / t))
        if not math.isfinite(wv):
            raise ConstructionError(f"rate function returned {wv} at {1.0 / t}")
        return mx.make([(t + t * wv, 1.0)])

    return ChernoffFamily(f"perturbed_shift[{w.description}]", build, TRANSLATION, {"w": w})


def quadratic_shift(coef: float) -> ChernoffFamily:
    """Shift by ``t + coef t^2``; n-th power shifts by ``t + coef t^2 / n``."""
    coef = float(coef)
    if coef == 0.0:
        raise ConstructionError("coef=0 is the exact translation; use translation_exact")
    return ChernoffFamily(f"quadratic_shift[{coef:g}]",
                          lambda t: mx.make([(t + coef * t * t, 1.0)]),
                          TRANSLATION, {"coef": coef})


def _check_a(a):
    a = float(a)
    if not a > 0 or not math.isfinite(a):
        raise ConstructionError("diffusion coefficient a must be positive")
    return a


def heat_G(a: float = 1.0) -> ChernoffFamily:
    """``(1/4) f(x + 2a sqrt t) + (1/2) f(x) + (1/4) f(x - 2a sqrt t)``."""
    a = _check_a(a)

    def build(t):
        if t == 0:
            return mx.IDENTITY
        h = 2.0 * a * math.sqrt(t)
        return mx.make([(-h, 0.25), (0.0, 0.5), (h, 0.25)])

    return ChernoffFamily("heat_G", build, HEAT, {"a": a})


def heat_S(a: float = 1.0) -> ChernoffFamily:
    """``(2/3) f(x) + (1/6) f(x + a sqrt(6t)) + (1/6) f(x - a sqrt(6t))``."""
    a = _check_a(a)

    def build(t):
        # the weights do not sum to exactly 1.0 in floating point
        if t == 0:
            return mx.IDENTITY
        h = a * math.sqrt(6.0 * t)
        return mx.make([(-h, 1.0 / 6.0), (0.0, 2.0 / 3.0), (h, 1.0 / 6.0)])

    return ChernoffFamily("heat_S", build, HEAT, {"a": a})


def parse_family(spec: str, a: float = 1.0) -> ChernoffFamily:
    """Family from a catalog string: ``heat_G``, ``heat_S``, ``translation_exact``,
    ``quadratic_shift:coef`` or ``perturbed_shift:<rate spec>``."""
    name, _, arg = spec.strip().partition(":")
    if name == "heat_G":
        return heat_G(a)
    if name == "heat_S":
        return heat_S(a)
    if name == "translation_exact":
        return translation_exact()
    if name == "quadratic_shift":
        try:
            return quadratic_shift(float(arg) if arg else 1.0)
        except ValueError:
            raise ConstructionError(f"bad coefficient {arg!r} in family spec {spec!r}") from None
    if name == "perturbed_shift":
        return perturbed_shift(parse_rate(arg or "inv_log"))
    known = ", ".join(FAMILY_CATALOG)
    raise ConstructionError(f"unknown family {name!r}; catalog: {known}")


FAMILY_CATALOG = {
    "heat_G": "heat_G  weights (1/4, 1/2, 1/4) at offsets (-2a sqrt t, 0, 2a sqrt t)",
    "heat_S": "heat_S  weights (1/6, 2/3, 1/6) at offsets (-a sqrt(6t), 0, a sqrt(6t))",
    "translation_exact": "translation_exact  shift by t (the exact semigroup)",
    "quadratic_shift": "quadratic_shift:coef  shift by t + coef t^2",
    "perturbed_shift": "perturbed_shift:<rate>  shift by t + t w(1/t); rate in zero, inv_log, power:p",
}


def generator_action(fam: ChernoffFamily, f) -> Callable:
    """Closed-form ``Lf`` for the family's target generator."""
    if fam.target == TRANSLATION:
        if f.deriv is None:
            raise DomainError(f"{f.name} has no closed-form derivative")
        return f.deriv
    if f.deriv2 is None:
        raise DomainError(f"{f.name} has no closed-form second derivative")
    a2 = fam.a ** 2
    return lambda x: a2 * f.deriv2(x)


def tangency_check(fam: ChernoffFamily, f, Lf: Callable, ts, domain) -> np.ndarray:
    """Sup over the grid of ``|(G(t)f - f)/t - Lf|`` for each ``t`` in ``ts``.

    For a Chernoff-tangent family the residuals shrink to zero as ``t``
    does. ``ts`` must be positive and strictly decreasing.
    """
    ts = [float(t) for t in ts]
    if any(t <= 0 for t in ts):
        raise DomainError("tangency probe times must be positive")
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise DomainError("tangency probe times must be strictly decreasing")
    x = domain.grid() if hasattr(domain, "grid") else np.asarray(domain, dtype=float)
    fx = f(x)
    lfx = Lf(x)
    out = []
    for t in ts:
        gf = mx.apply(fam(t), f, x)
        out.append(float(np.max(np.abs((gf - fx) / t - lfx))))
    return np.array(out)


def tangency_ok(residuals, slack: float = 0.1, drop: float = 10.0) -> bool:
    """Residuals non-increasing up to ``slack`` and the last at most ``first/drop``."""
    r = np.asarray(residuals, dtype=float)
    mono = all(b <= a * (1 + slack) for a, b in zip(r, r[1:]))
    return bool(mono and r[-1] <= r[0] / drop)


@dataclass(frozen=True)
class NormGrowth:
    omega_estimate: float
    satisfied: bool


def norm_growth_check(fam: ChernoffFamily, ts, omega: float = 0.0, tol: float = 1e-12) -> NormGrowth:
    """Largest ``ln ||G(t)|| / t`` over ``ts`` and whether it stays below ``omega``.

    ``tol`` absorbs the roundoff in summing weights such as 1/6 + 2/3 + 1/6.
    """
    ts = [float(t) for t in ts]
    if not ts:
        raise DomainError("norm growth check needs at least one t")
    if any(t <= 0 for t in ts):
        raise DomainError("norm growth probe times must be positive")
    est = max(math.log(mx.operator_norm(fam(t))) / t for t in ts)
    return NormGrowth(est, est <= omega + tol)


def gaussian_moment(k: int, variance: float) -> float:
    """``E[X^k]`` for a centred normal with the given variance."""
    if k % 2:
        return 0.0
    return variance ** (k // 2) * float(np.prod(np.arange(k - 1, 0, -2), dtype=float))


@dataclass(frozen=True)
class MomentMatch:
    """First order at which the family's moments leave the Gaussian ones.

    ``predicted_rate_exponent`` follows the derivative-matching heuristic
    (mismatch at order ``k`` suggests error ``~ n^{-(k-2)/2}``); it is a
    prediction, not a theorem. Both fields are ``None`` when every moment
    up to ``kmax`` matches.
    """

    first_mismatch_k: Optional[int]
    predicted_rate_exponent: Optional[float]
    moments: tuple
    gaussian: tuple


def moment_match_order(fam: ChernoffFamily, a: float, t: float, kmax: int,
                       rtol: float = MOMENT_RTOL) -> MomentMatch:
    if fam.target != HEAT:
        raise DomainError(f"{fam.name} does not target the heat semigroup")
    if kmax < 2:
        raise DomainError("kmax must be at least 2")
    if not t > 0:
        raise DomainError("t must be positive")
    m = fam(t)
    var = 2.0 * a * a * t
    moments, gauss = [], []
    first = None
    for k in range(kmax + 1):
        mk = mx.moment(m, k)
        gk = gaussian_moment(k, var)
        moments.append(mk)
        gauss.append(gk)
        # odd Gaussian moments vanish, so compare against the natural scale var^(k/2)
        scale = max(abs(gk), var ** (k / 2))
        if first is None and abs(mk - gk) > rtol * scale:
            first = k
    exponent = None if first is None else (first - 2) / 2
    return MomentMatch(first, exponent, tuple(moments), tuple(gauss))
