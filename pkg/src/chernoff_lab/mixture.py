"""Finitely supported shift operators.

A :class:`ShiftMixture` represents the operator ``f -> sum_i w_i f(. + s_i)``.
Composition of two such operators is the convolution of their atom lists,
so n-fold powers of every Chernoff function used in this package stay exact
finite mixtures.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

from .errors import ConstructionError, EvaluationError, ResourceError

MERGE_RTOL = 1e-12
DEFAULT_ATOM_CAP = 2_000_001
PRUNE_BELOW = 1e-300

# dense lattice convolution is used only when the index range is not much
# larger than the atom count
_LATTICE_FILL = 4


def merge_tolerance(s, s2):
    """Distance below which two offsets are treated as the same atom."""
    return MERGE_RTOL * np.maximum(1.0, np.maximum(np.abs(s), np.abs(s2)))


class ShiftMixture:
    """Immutable weighted set of translation offsets, sorted by offset.

    Build instances with :func:`make`; the constructor assumes its inputs
    are already sorted, merged and pruned.
    """

    __slots__ = ("_offsets", "_weights")

    def __init__(self, offsets: np.ndarray, weights: np.ndarray):
        offsets = np.array(offsets, dtype=float)
        weights = np.array(weights, dtype=float)
        offsets.setflags(write=False)
        weights.setflags(write=False)
        self._offsets = offsets
        self._weights = weights

    @property
    def offsets(self) -> np.ndarray:
        return self._offsets

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return [(float(s), float(w)) for s, w in zip(self._offsets, self._weights)]

    def __len__(self) -> int:
        return len(self._offsets)

    def __repr__(self) -> str:
        if len(self) <= 6:
            body = ", ".join(f"({s:.6g}, {w:.6g})" for s, w in self.atoms)
        else:
            body = f"{len(self)} atoms on [{self._offsets[0]:.6g}, {self._offsets[-1]:.6g}]"
        return f"ShiftMixture({body})"

    def isclose(self, other: "ShiftMixture", weight_rtol: float = 1e-12,
                weight_atol: float = 0.0) -> bool:
        """Atom-wise equality: offsets within merge tolerance, weights within ``weight_rtol``."""
        if len(self) != len(other):
            return False
        if not np.all(np.abs(self._offsets - other._offsets)
                      <= merge_tolerance(self._offsets, other._offsets)):
            return False
        return bool(np.allclose(self._weights, other._weights,
                                rtol=weight_rtol, atol=weight_atol))

    def is_symmetric(self, rtol: float = 1e-12) -> bool:
        return self.isclose(ShiftMixture(-self._offsets[::-1], self._weights[::-1]),
                            weight_rtol=rtol)


def _finalize(offsets: np.ndarray, weights: np.ndarray, presorted: bool = False) -> ShiftMixture:
    """Sort, merge coincident offsets, prune underflowed weights."""
    if not presorted:
        order = np.argsort(offsets, kind="stable")
        offsets = offsets[order]
        weights = weights[order]
    if len(offsets) > 1:
        gaps = np.diff(offsets)
        joined = gaps <= merge_tolerance(offsets[:-1], offsets[1:])
        if joined.any():
            starts = np.flatnonzero(np.concatenate(([True], ~joined)))
            counts = np.diff(np.append(starts, len(offsets)))
            offsets = np.add.reduceat(offsets, starts) / counts
            weights = np.add.reduceat(weights, starts)
    keep = np.abs(weights) >= PRUNE_BELOW
    if not keep.any():
        # keep the heaviest atom so the mixture is never empty
        i = int(np.argmax(np.abs(weights)))
        keep = np.zeros_like(keep)
        keep[i] = True
    return ShiftMixture(offsets[keep], weights[keep])


def make(atoms: Iterable[tuple[float, float]]) -> ShiftMixture:
    """Build a mixture from ``(offset, weight)`` pairs.

    Offsets are sorted, coincident offsets (within the merge tolerance) are
    combined by summing weights, and atoms whose weight ends up below
    ``1e-300`` in magnitude are dropped unless nothing would remain.
    """
    atoms = list(atoms)
    if not atoms:
        raise ConstructionError("a shift mixture needs at least one atom")
    arr = np.asarray(atoms, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ConstructionError("atoms must be (offset, weight) pairs")
    if not np.all(np.isfinite(arr)):
        raise ConstructionError("offsets and weights must be finite")
    return _finalize(arr[:, 0], arr[:, 1])


IDENTITY = make([(0.0, 1.0)])


def apply(m: ShiftMixture, f: Callable, x):
    """Evaluate ``sum_i w_i f(x + s_i)``, accumulating in ascending-offset order.

    ``x`` may be a scalar or an array; ``f`` must accept numpy arrays.
    """
    x_arr = np.asarray(x, dtype=float)
    flat = x_arr.reshape(-1)
    acc = np.zeros_like(flat)
    offsets, weights = m.offsets, m.weights
    chunk = max(1, min(len(offsets), 2_000_000 // max(1, flat.size)))
    for start in range(0, len(offsets), chunk):
        s = offsets[start:start + chunk]
        vals = np.asarray(f(flat[:, None] + s[None, :]), dtype=float)
        vals = np.broadcast_to(vals, (flat.size, len(s)))
        w = weights[start:start + chunk]
        for j in range(len(s)):
            acc += w[j] * vals[:, j]
    if not np.all(np.isfinite(acc)):
        raise EvaluationError("mixture applied to f produced non-finite values")
    if x_arr.ndim == 0:
        return float(acc[0])
    return acc.reshape(x_arr.shape)


def _lattice(m: ShiftMixture):
    """Return ``(start, step, indices)`` if the offsets sit on a regular lattice."""
    s = m.offsets
    if len(s) < 2:
        return None
    span = s[-1] - s[0]
    gmin = float(np.min(np.diff(s)))
    if gmin <= 0.0:
        return None
    steps = round(span / gmin)
    if steps < 1 or steps + 1 > _LATTICE_FILL * len(s):
        return None
    h = span / steps
    idx = np.rint((s - s[0]) / h).astype(np.int64)
    recon = s[0] + idx * h
    if not np.all(np.abs(recon - s) <= merge_tolerance(recon, s)):
        return None
    return float(s[0]), float(h), idx


def _convolve_lattice(m1, lat1, m2, lat2, cap):
    s1, h1, i1 = lat1
    s2, h2, i2 = lat2
    # both steps must agree; offsets are rebuilt from the longer mixture's step
    h = h1 if len(m1) >= len(m2) else h2
    reach = abs(s1) + abs(s2) + h * (i1[-1] + i2[-1])
    if abs(h1 - h2) * (i1[-1] + i2[-1]) > 0.1 * MERGE_RTOL * max(1.0, reach):
        return None
    d1 = np.zeros(int(i1[-1]) + 1)
    d1[i1] = m1.weights
    d2 = np.zeros(int(i2[-1]) + 1)
    d2[i2] = m2.weights
    if len(d1) + len(d2) - 1 > _LATTICE_FILL * cap:
        return None
    w = np.convolve(d1, d2)
    offsets = (s1 + s2) + np.arange(len(w)) * h
    nz = w != 0.0
    offsets, w = offsets[nz], w[nz]
    if len(w) == 0:
        offsets, w = np.array([s1 + s2]), np.array([0.0])
    return offsets, w


def convolve(m1: ShiftMixture, m2: ShiftMixture, cap: int = DEFAULT_ATOM_CAP) -> ShiftMixture:
    """Composition of two shift operators: offsets add, weights multiply."""
    if len(m1) == 1 or len(m2) == 1:
        one, other = (m1, m2) if len(m1) == 1 else (m2, m1)
        s, w = one.offsets[0], one.weights[0]
        return _finalize(other.offsets + s, other.weights * w, presorted=True)

    lat1, lat2 = _lattice(m1), _lattice(m2)
    if lat1 is not None and lat2 is not None:
        res = _convolve_lattice(m1, lat1, m2, lat2, cap)
        if res is not None:
            out = _finalize(res[0], res[1], presorted=True)
            if len(out) > cap:
                raise ResourceError(f"convolution has {len(out)} atoms, above the cap {cap}")
            return out

    if len(m1) * len(m2) > cap:
        raise ResourceError(
            f"convolution of {len(m1)} x {len(m2)} atoms exceeds the cap {cap}")
    offsets = (m1.offsets[:, None] + m2.offsets[None, :]).ravel()
    weights = (m1.weights[:, None] * m2.weights[None, :]).ravel()
    return _finalize(offsets, weights)


def power(m: ShiftMixture, n: int, cap: int = DEFAULT_ATOM_CAP) -> ShiftMixture:
    """n-fold composition of ``m`` with itself, by binary exponentiation."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ConstructionError(f"power needs a positive integer exponent, got {n!r}")
    n = int(n)
    try:
        result = None
        base = m
        k = n
        while True:
            if k & 1:
                result = base if result is None else convolve(result, base, cap)
            k >>= 1
            if not k:
                break
            base = convolve(base, base, cap)
    except ResourceError as exc:
        raise ResourceError(f"power(m, n={n}) exceeds the atom cap {cap}: {exc}") from exc
    return result


def operator_norm(m: ShiftMixture) -> float:
    """Sup-norm operator norm, i.e. the total variation ``sum |w_i|``."""
    return float(np.sum(np.abs(m.weights)))


def moment(m: ShiftMixture, k: int) -> float:
    if k < 0:
        raise ConstructionError("moment order must be non-negative")
    if k == 0:
        return float(np.sum(m.weights))
    return float(np.sum(m.weights * m.offsets ** k))


def charfn(m: ShiftMixture, k: float) -> complex:
    """``sum_j w_j exp(i k s_j)``; the eigenvalue of ``m`` on ``exp(i k x)``."""
    return complex(np.sum(m.weights * np.exp(1j * k * m.offsets)))


def variance(m: ShiftMixture) -> float:
    """Variance of a mixture with unit total weight."""
    mass = moment(m, 0)
    mean = moment(m, 1) / mass
    return float(np.sum(m.weights * (m.offsets - mean) ** 2) / mass)


def sequential_power(m: ShiftMixture, n: int, cap: int = DEFAULT_ATOM_CAP) -> ShiftMixture:
    """n-fold power by n-1 successive convolutions (slow; used for cross-checks)."""
    out = m
    for _ in range(n - 1):
        out = convolve(out, m, cap)
    return out


def is_probability(m: ShiftMixture, tol: float = 1e-12) -> bool:
    return bool(np.all(m.weights >= 0) and math.isclose(moment(m, 0), 1.0, abs_tol=tol))
