"""Ratio and log-ratio coordinate maps on the open simplex.

A composition ``x`` (positive entries summing to 1) has two classical
coordinate systems built on the last component as reference:

* the ratio map ``y_i = x_i / x_n`` onto the positive orthant, with
  inverse ``x_i = y_i / z``, ``x_n = 1 / z`` where ``z = 1 + sum(y)``;
* the additive log-ratio map ``y_i = log(x_i / x_n)`` onto R^{n-1},
  with inverse ``x_i = e^{y_i} / k``, ``x_n = 1 / k`` where
  ``k = 1 + sum(exp(y))``.

Both inverses carry closed-form Jacobian determinants (``z^{-n}`` and
``k^{-n} prod(e^{y_i})``), obtained from the matrix determinant lemma
after dropping the redundant n-th simplex coordinate.  All Jacobians
here are therefore for the chart that keeps the first n-1 coordinates;
the finite-difference machinery at the bottom of the module uses the
same chart, so the two routes are directly comparable.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .special import log_sum_exp

__all__ = [
    "Composition",
    "RatioVector",
    "LogRatioVector",
    "ratio_forward",
    "ratio_inverse",
    "log_ratio_forward",
    "log_ratio_inverse",
    "log_det_jacobian_ratio_inverse",
    "log_det_jacobian_log_ratio_inverse",
    "finite_difference_jacobian",
    "finite_difference_log_det_ratio_inverse",
    "finite_difference_log_det_log_ratio_inverse",
]

# Raw sums farther than this from 1 are contract violations, not float noise.
_SUM_SLACK = 1e-9
# Entries below the smallest normal float are treated as boundary points
# and rejected: the transforms are singular there and the densities live
# on the open simplex.  (The floor sits at the subnormal threshold so the
# shift-stable inverse can still return entries like exp(-700)/2.)
_POSITIVE_FLOOR = sys.float_info.min

_FD_STEP = 1e-6


@dataclass(frozen=True)
class Composition:
    """A point on the open simplex: positive entries summing to 1.

    The constructor renormalizes away accumulated float error (raw sums
    within 1e-9 of 1) and rejects anything worse, as well as effectively
    zero entries (zero or subnormal), where the maps below are singular.
    """

    entries: np.ndarray

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("Composition requires a vector of length >= 2")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Composition entries must be finite")
        if np.any(arr < _POSITIVE_FLOOR):
            raise ValueError(
                "Composition entries must be strictly positive normal floats; "
                "boundary points are rejected rather than clamped"
            )
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_SLACK:
            raise ValueError(
                f"Composition entries sum to {total!r}, more than 1e-9 away from 1"
            )
        arr /= total
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.size


@dataclass(frozen=True)
class RatioVector:
    """Image of a composition under the ratio map: n-1 positive entries
    ``y_i = x_i / x_n``, with ``z = 1 + sum(y)`` cached."""

    entries: np.ndarray
    z: float = field(init=False)

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("RatioVector requires a vector of length >= 1")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise ValueError("RatioVector entries must be strictly positive and finite")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "z", 1.0 + float(arr.sum()))

    @property
    def n(self) -> int:
        """Dimension of the underlying composition (one more than len(entries))."""
        return self.entries.size + 1


@dataclass(frozen=True)
class LogRatioVector:
    """Image of a composition under the log-ratio map: n-1 real entries
    ``y_i = log(x_i / x_n)``.

    ``k = 1 + sum(exp(y))`` is cached through its log, computed
    shift-stably, so extreme entries (e.g. y = 700) do not overflow the
    quantities the densities actually need.
    """

    entries: np.ndarray
    log_k: float = field(init=False)

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("LogRatioVector requires a vector of length >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("LogRatioVector entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)
        with_zero = np.append(arr, 0.0)
        object.__setattr__(self, "log_k", float(log_sum_exp(with_zero)))

    @property
    def k(self) -> float:
        """1 + sum(exp(entries)); inf when not representable in float64."""
        return math.exp(self.log_k)

    @property
    def n(self) -> int:
        return self.entries.size + 1


def ratio_forward(x: Composition) -> RatioVector:
    """Map a composition to its ratio coordinates y_i = x_i / x_n."""
    e = x.entries
    return RatioVector(e[:-1] / e[-1])


def ratio_inverse(y: RatioVector) -> Composition:
    """Map ratio coordinates back to the simplex: x_i = y_i / z, x_n = 1 / z."""
    raw = np.append(y.entries, 1.0) / y.z
    return Composition(raw)


def log_ratio_forward(x: Composition) -> LogRatioVector:
    """Map a composition to additive log-ratio coordinates log(x_i / x_n)."""
    logs = np.log(x.entries)
    return LogRatioVector(logs[:-1] - logs[-1])


def log_ratio_inverse(y: LogRatioVector) -> Composition:
    """Map log-ratio coordinates back to the simplex.

    Softmax with an implicit zero for the reference coordinate, computed
    shift-stably: max(0, max(y)) is subtracted before exponentiating, so
    large entries do not overflow.
    """
    shift = max(0.0, float(y.entries.max()))
    w = np.exp(np.append(y.entries, 0.0) - shift)
    return Composition(w / w.sum())


def log_det_jacobian_ratio_inverse(y: RatioVector, n: int) -> float:
    """log |det J| of the ratio inverse map into the first n-1 simplex
    coordinates; the closed form is ``-n * log(z)``."""
    if n != y.n:
        raise ValueError(f"expected {n - 1} ratio entries for n={n}, got {y.entries.size}")
    return -n * math.log(y.z)


def log_det_jacobian_log_ratio_inverse(y: LogRatioVector, n: int) -> float:
    """log |det J| of the log-ratio inverse map into the first n-1 simplex
    coordinates; the closed form is ``sum(y) - n * log(k)``."""
    if n != y.n:
        raise ValueError(f"expected {n - 1} log-ratio entries for n={n}, got {y.entries.size}")
    return float(y.entries.sum()) - n * y.log_k


# ---------------------------------------------------------------------------
# Finite-difference route: an independent check of the closed forms above.
# ---------------------------------------------------------------------------


def finite_difference_jacobian(func, point, step: float = _FD_STEP) -> np.ndarray:
    """Central-difference Jacobian of ``func: R^d -> R^d`` at ``point``.

    The default step of 1e-6 balances truncation against round-off for
    the 1e-6 relative tolerances used when comparing against the closed
    forms.
    """
    p = np.asarray(point, dtype=float)
    d = p.size
    jac = np.empty((d, d), dtype=float)
    for j in range(d):
        bump = np.zeros(d)
        bump[j] = step
        hi = np.asarray(func(p + bump), dtype=float)
        lo = np.asarray(func(p - bump), dtype=float)
        jac[:, j] = (hi - lo) / (2.0 * step)
    return jac


def _signed_log_det(jac: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(jac)
    if sign <= 0.0:
        raise ValueError("finite-difference Jacobian has non-positive determinant")
    return float(logdet)


def finite_difference_log_det_ratio_inverse(y_entries, step: float = _FD_STEP) -> float:
    """log |det J| of the implemented ratio inverse, by central differences
    of the first n-1 output coordinates and an LU determinant."""

    def chart(vec):
        return ratio_inverse(RatioVector(vec)).entries[:-1]

    return _signed_log_det(finite_difference_jacobian(chart, y_entries, step))


def finite_difference_log_det_log_ratio_inverse(y_entries, step: float = _FD_STEP) -> float:
    """log |det J| of the implemented log-ratio inverse, same route."""

    def chart(vec):
        return log_ratio_inverse(LogRatioVector(vec)).entries[:-1]

    return _signed_log_det(finite_difference_jacobian(chart, y_entries, step))
