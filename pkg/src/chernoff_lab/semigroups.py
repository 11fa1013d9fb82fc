"""Exact semigroup oracles: translation and the heat semigroup on the real line."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConfigurationError, DomainError, EvaluationError

TRANSLATION = "translation"
HEAT_SPECTRAL = "heat_spectral"
HEAT_QUADRATURE = "heat_quadrature"
KINDS = (TRANSLATION, HEAT_SPECTRAL, HEAT_QUADRATURE)

DEFAULT_NODES = 64


@lru_cache(maxsize=None)
def gauss_hermite(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Golub–Welsch nodes and normalized weights for the weight ``exp(-s^2)``.

    The Jacobi matrix of the physicists' Hermite polynomials has zero
    diagonal and off-diagonal ``sqrt(k/2)``. Weights are the squared first
    components of the normalized eigenvectors, so they sum to one and the
    rule integrates ``exp(-s^2)/sqrt(pi)``.
    """
    if nodes < 1:
        raise DomainError("quadrature needs at least one node")
    off = np.sqrt(np.arange(1, nodes) / 2.0)
    x, v = eigh_tridiagonal(np.zeros(nodes), off)
    w = v[0, :] ** 2
    # symmetrize: the rule is exactly symmetric, eigen-solver noise is not
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    w = w / w.sum()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def translate(f: Callable, t: float, x):
    """Translation semigroup: ``f(x + t)``."""
    if t < 0:
        raise DomainError("translation time must be non-negative")
    return f(np.asarray(x, dtype=float) + t)


def heat_spectral(k: float, a: float, t: float, x):
    """Exact heat evolution of ``sin(k x)`` under ``u_t = a^2 u_xx``."""
    if t < 0:
        raise DomainError("time must be non-negative")
    if not a > 0:
        raise DomainError("diffusion coefficient must be positive")
    return np.exp(-a * a * k * k * t) * np.sin(k * np.asarray(x, dtype=float))


def heat_quadrature(f: Callable, a: float, t: float, x, nodes: int = DEFAULT_NODES):
    """Poisson integral of ``f`` by Gauss–Hermite quadrature.

    Substituting ``y = x + 2 a sqrt(t) s`` turns the heat-kernel
    convolution into ``pi^{-1/2} * int exp(-s^2) f(x + 2 a sqrt(t) s) ds``.
    Accurate for oscillatory data only while ``a k sqrt(t) <= 2`` at 64
    nodes; raise ``nodes`` for higher frequencies.
    """
    if t == 0:
        raise DomainError("heat_quadrature is undefined at t=0; use f(x) directly")
    if t < 0:
        raise DomainError("time must be positive")
    if not a > 0:
        raise DomainError("diffusion coefficient must be positive")
    s, w = gauss_hermite(int(nodes))
    x_arr = np.asarray(x, dtype=float)
    pts = x_arr.reshape(-1)[:, None] + (2.0 * a * math.sqrt(t)) * s[None, :]
    vals = np.asarray(f(pts), dtype=float) @ w
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("heat quadrature produced non-finite values")
    if x_arr.ndim == 0:
        return float(vals[0])
    return vals.reshape(x_arr.shape)


@dataclass(frozen=True)
class SemigroupOracle:
    """Exact evaluator of ``e^{tL} f`` for the translation or heat generator.

    ``heat_spectral`` relies on the function's closed-form heat evolution;
    ``heat_quadrature`` integrates the Poisson kernel numerically.
    """

    kind: str
    a: Optional[float] = None
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown oracle kind {self.kind!r}; expected one of {KINDS}")
        if self.kind != TRANSLATION:
            if self.a is None or not self.a > 0:
                raise ConfigurationError("heat oracles need a diffusion coefficient a > 0")
        if self.kind == HEAT_QUADRATURE and (self.nodes < 2 or self.nodes % 2):
            raise ConfigurationError("quadrature node count must be even and at least 2")

    @property
    def target(self) -> str:
        return TRANSLATION if self.kind == TRANSLATION else "heat"

    def evaluate(self, f, t: float, x):
        if self.kind == TRANSLATION:
            return translate(f, t, x)
        if self.kind == HEAT_SPECTRAL:
            if getattr(f, "heat_closed_form", None) is None:
                raise ConfigurationError(
                    f"{getattr(f, 'name', f)!r} has no closed-form heat evolution; "
                    "use the heat_quadrature oracle")
            return f.heat_closed_form(self.a, t, np.asarray(x, dtype=float))
        return heat_quadrature(f, self.a, t, x, self.nodes)


def translation_oracle() -> SemigroupOracle:
    return SemigroupOracle(TRANSLATION)


def heat_oracle(a: float, kind: str = HEAT_SPECTRAL, nodes: int = DEFAULT_NODES) -> SemigroupOracle:
    return SemigroupOracle(kind, a=a, nodes=nodes)
