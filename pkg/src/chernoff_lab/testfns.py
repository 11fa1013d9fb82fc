"""Catalog of bounded, uniformly continuous test functions on the real line.

Every function is vectorized over numpy arrays and carries the metadata
the experiments need: period, Hölder class, derivatives, non-smooth points
and, where one exists, the closed-form heat evolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConstructionError


@dataclass(frozen=True)
class HolderClass:
    alpha: float
    constant: float
    samples: int


@dataclass(frozen=True)
class TestFunction:
    """A function in UC_b(R) together with its regularity metadata.

    ``kinks`` lists the non-smooth points inside one period (or on the whole
    line for non-periodic functions); the error harness adds grid points
    there so that sup-norms over Hölder functions are not under-sampled.
    """

    __test__ = False  # keep pytest from collecting this class

    eval: Callable[[np.ndarray], np.ndarray]
    name: str
    smooth: bool
    period: Optional[float] = None
    holder: Optional[HolderClass] = None
    deriv: Optional[Callable] = None
    deriv2: Optional[Callable] = None
    heat_closed_form: Optional[Callable] = None
    kinks: tuple = field(default=())
    bound: Optional[float] = None
    scale: Optional[float] = None

    def __call__(self, x):
        return self.eval(x)


def sine(k: float = 1.0) -> TestFunction:
    """``sin(k x)``, an exact eigenvector direction of every symmetric shift mixture."""
    k = float(k)
    if k == 0.0 or not math.isfinite(k):
        raise ConstructionError("sine needs a finite non-zero frequency; use const for k=0")
    return TestFunction(
        eval=lambda x: np.sin(k * np.asarray(x, dtype=float)),
        name=f"sine:{k:g}",
        smooth=True,
        period=2 * math.pi / abs(k),
        deriv=lambda x: k * np.cos(k * np.asarray(x, dtype=float)),
        deriv2=lambda x: -k * k * np.sin(k * np.asarray(x, dtype=float)),
        heat_closed_form=lambda a, t, x: np.exp(-a * a * k * k * t) * np.sin(k * np.asarray(x, dtype=float)),
        bound=1.0,
    )


def gaussian(sigma: float = 1.0) -> TestFunction:
    sigma = float(sigma)
    if not sigma > 0 or not math.isfinite(sigma):
        raise ConstructionError("gaussian needs sigma > 0")
    s2 = sigma * sigma

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-x * x / (2 * s2))

    def d1(x):
        x = np.asarray(x, dtype=float)
        return -x / s2 * np.exp(-x * x / (2 * s2))

    def d2(x):
        x = np.asarray(x, dtype=float)
        return (x * x / (s2 * s2) - 1 / s2) * np.exp(-x * x / (2 * s2))

    def heat(a, t, x):
        # the heat kernel is a centred Gaussian of variance 2 a^2 t
        v = s2 + 2 * a * a * t
        x = np.asarray(x, dtype=float)
        return sigma / np.sqrt(v) * np.exp(-x * x / (2 * v))

    return TestFunction(eval=f, name=f"gaussian:{sigma:g}", smooth=True,
                        deriv=d1, deriv2=d2, heat_closed_form=heat, bound=1.0,
                        scale=sigma)


def _certify_holder(f: Callable, alpha: float, period: float, kinks, n: int = 20001) -> HolderClass:
    """Empirical Hölder constant: the largest sampled difference quotient.

    Samples a uniform grid over one period at several lags plus pairs that
    straddle each kink at lags down to 1e-12, where the quotient of a cusp
    is largest. The result is inflated by 1e-9 relative to absorb roundoff.
    """
    x = np.linspace(0.0, period, n)
    fx = f(x)
    best = 0.0
    count = 0
    for lag in (1, 2, 5, 10, 50, 200, 1000, n // 4, n // 2):
        d = np.abs(fx[lag:] - fx[:-lag])
        h = x[lag:] - x[:-lag]
        best = max(best, float(np.max(d / h ** alpha)))
        count += len(d)
    hs = np.logspace(-12, 0, 241)
    for c in kinks:
        for sign in (1.0, -1.0):
            d = np.abs(f(c + sign * hs) - f(np.full_like(hs, c)))
            best = max(best, float(np.max(d / hs ** alpha)))
            count += len(hs)
    return HolderClass(alpha=alpha, constant=best * (1 + 1e-9), samples=count)


def holder_sine(alpha: float = 0.5) -> TestFunction:
    """``|sin x|**alpha``: periodic, Hölder of exponent ``alpha`` with a cusp at every ``k*pi``."""
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ConstructionError("holder_sine needs alpha in (0, 1]")

    def f(x):
        return np.abs(np.sin(np.asarray(x, dtype=float))) ** alpha

    period = math.pi
    kinks = (0.0,)
    return TestFunction(eval=f, name=f"holder_sine:{alpha:g}", smooth=False,
                        period=period, holder=_certify_holder(f, alpha, period, kinks),
                        kinks=kinks, bound=1.0)


def const(c: float = 1.0) -> TestFunction:
    c = float(c)
    if not math.isfinite(c):
        raise ConstructionError("const needs a finite value")
    return TestFunction(
        eval=lambda x: np.full(np.shape(x), c),
        name=f"const:{c:g}",
        smooth=True,
        deriv=lambda x: np.zeros(np.shape(x)),
        deriv2=lambda x: np.zeros(np.shape(x)),
        heat_closed_form=lambda a, t, x: np.full(np.shape(x), c),
        bound=abs(c),
    )


def combine(f: TestFunction, g: TestFunction, alpha: float, beta: float) -> TestFunction:
    """Pointwise linear combination ``alpha f + beta g`` with merged metadata."""
    def lin(p, q):
        if p is None or q is None:
            return None
        return lambda *args: alpha * p(*args) + beta * q(*args)

    period = None
    if f.period is not None and g.period is not None and math.isclose(f.period, g.period):
        period = f.period
    scales = [s for s in (f.scale, g.scale) if s is not None]
    bound = None
    if f.bound is not None and g.bound is not None:
        bound = abs(alpha) * f.bound + abs(beta) * g.bound
    return TestFunction(
        eval=lambda x: alpha * f.eval(x) + beta * g.eval(x),
        name=f"{alpha:g}*{f.name}+{beta:g}*{g.name}",
        smooth=f.smooth and g.smooth,
        period=period,
        deriv=lin(f.deriv, g.deriv),
        deriv2=lin(f.deriv2, g.deriv2),
        heat_closed_form=lin(f.heat_closed_form, g.heat_closed_form),
        kinks=tuple(sorted(set(f.kinks) | set(g.kinks))),
        bound=bound,
        scale=max(scales) if scales else None,
    )


CATALOG = {
    "sine": (sine, "sine:k  sin(k x)"),
    "gaussian": (gaussian, "gaussian:sigma  exp(-x^2 / (2 sigma^2))"),
    "holder_sine": (holder_sine, "holder_sine:alpha  |sin x|^alpha"),
    "const": (const, "const:c  constant c"),
}


def parse_function(spec: str) -> TestFunction:
    """Build a catalog function from a ``name:param`` string such as ``"sine:1"``."""
    name, _, arg = spec.strip().partition(":")
    if name not in CATALOG:
        known = ", ".join(sorted(CATALOG))
        raise ConstructionError(f"unknown test function {name!r}; catalog: {known}")
    factory = CATALOG[name][0]
    if not arg:
        return factory()
    try:
        value = float(arg)
    except ValueError:
        raise ConstructionError(f"bad parameter {arg!r} in function spec {spec!r}") from None
    return factory(value)
