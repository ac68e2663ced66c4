"""Densities, mass functions and samplers for the count/composition chain.

The continuous side: Dirichlet on the simplex and its two push-forwards,
the Inverted Dirichlet (ratio coordinates) and the ALR-Dirichlet
(log-ratio coordinates).

The count side is the normalize-condition chain.  Independent
Poisson(lambda_i) counts with Gamma(r_i, theta) intensities sharing one
scale give:

* total S ~ NegativeBinomial(R, p) with R = sum(r), p = theta/(1+theta);
* counts given S = m and lambda ~ Multinomial(m, lambda/lambda');
* counts given S = m alone ~ DirichletMultinomial(r);
* one count given S = m (others merged) ~ BetaBinomial(r_1, R - r_1, m);
* the normalized count Y_1 = X_1/S has mass NB(m) * BetaBinomial(k)
  on pairs (k, m).

Everything is log-domain first; exponentiate for linear values.  The
negative binomial follows the convention in which ``p`` multiplies
``p^m`` and ``(1-p)^R`` is the fixed factor, so the mean is
``R * theta``; some libraries swap the roles of p and 1-p.

Note on the normalized count: its pair mass function here includes the
m = 0 atom (probability (1-p)^R, with k forced to 0), so the total mass
is exactly 1.  Restricting to m >= 1, as the ratio k/m strictly
requires, leaves total mass 1 - (1-p)^R.  Both the pair PMF and a
value-aggregated PMF (mass of each reduced rational k/m) are provided.

Samplers take an explicit ``numpy.random.Generator``; identical seeds
give identical streams.  Concurrent sampling needs distinct generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .simplex import Composition
from .special import log_beta, log_gamma, log_multivariate_beta, log_sum_exp

__all__ = [
    "DirichletParams",
    "GammaMixtureParams",
    "CountVector",
    "BetaBinomialParams",
    "AggregatedValueMass",
    "dirichlet_log_pdf",
    "dirichlet_sample",
    "inverted_dirichlet_log_pdf",
    "alr_dirichlet_log_pdf",
    "gamma_sample",
    "poisson_sample",
    "negative_binomial_log_pmf",
    "negative_binomial_sample_via_mixture",
    "multinomial_log_pmf",
    "multinomial_sample",
    "dirichlet_multinomial_log_pmf",
    "beta_binomial_log_pmf",
    "normalized_nb_log_pmf",
    "normalized_nb_value_pmf",
    "nb_truncation_bound",
]


# ---------------------------------------------------------------------------
# Parameter and data bundles
# ---------------------------------------------------------------------------


def _positive_vector(values, what: str, min_len: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size < min_len:
        raise ValueError(f"{what} requires a vector of length >= {min_len}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError(f"{what} entries must be strictly positive and finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class DirichletParams:
    """Concentration vector alpha of a Dirichlet law, length n >= 2."""

    alpha: np.ndarray

    def __init__(self, alpha):
        object.__setattr__(self, "alpha", _positive_vector(alpha, "DirichletParams", 2))

    @property
    def n(self) -> int:
        return self.alpha.size

    @property
    def total(self) -> float:
        return float(self.alpha.sum())

    def log_normalizer(self) -> float:
        """log B(alpha)."""
        return log_multivariate_beta(self.alpha)


@dataclass(frozen=True)
class GammaMixtureParams:
    """Per-component Gamma shapes r_1..r_n with one shared scale theta.

    Derived: R = sum(r) and the count-success probability
    p = theta / (1 + theta).
    """

    shapes: np.ndarray
    scale: float

    def __init__(self, shapes, scale):
        object.__setattr__(self, "shapes", _positive_vector(shapes, "GammaMixtureParams shapes", 1))
        scale = float(scale)
        if not math.isfinite(scale) or scale <= 0.0:
            raise ValueError("GammaMixtureParams scale must be strictly positive and finite")
        object.__setattr__(self, "scale", scale)

    @property
    def n(self) -> int:
        return self.shapes.size

    @property
    def total_shape(self) -> float:
        """R = sum of the shapes."""
        return float(self.shapes.sum())

    @property
    def success_prob(self) -> float:
        """p = theta / (1 + theta), in (0, 1)."""
        return self.scale / (1.0 + self.scale)


@dataclass(frozen=True)
class CountVector:
    """Non-negative integer counts with their total cached."""

    counts: np.ndarray
    total: int = field(init=False)

    def __init__(self, counts):
        arr = np.array(counts)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("CountVector requires a vector of length >= 1")
        as_float = arr.astype(float)
        if not np.all(np.isfinite(as_float)) or np.any(as_float != np.floor(as_float)):
            raise ValueError("CountVector entries must be integers")
        if np.any(as_float < 0):
            raise ValueError("CountVector entries must be non-negative")
        ints = as_float.astype(np.int64)
        ints.flags.writeable = False
        object.__setattr__(self, "counts", ints)
        object.__setattr__(self, "total", int(ints.sum()))

    @property
    def n(self) -> int:
        return self.counts.size


@dataclass(frozen=True)
class BetaBinomialParams:
    """Beta-Binomial with shape a (= r_1), b (= R - r_1) and m trials."""

    a: float
    b: float
    m: int

    def __init__(self, a, b, m):
        a, b = float(a), float(b)
        if not (math.isfinite(a) and a > 0.0 and math.isfinite(b) and b > 0.0):
            raise ValueError("BetaBinomialParams requires a > 0 and b > 0")
        m = _as_count(m, "m")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)


def _as_count(value, what: str) -> int:
    try:
        i = int(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{what} must be a non-negative integer, got {value!r}") from exc
    if i != value or i < 0:
        raise ValueError(f"{what} must be a non-negative integer, got {value!r}")
    return i


def _as_shapes(params) -> np.ndarray:
    """Accept a GammaMixtureParams (scale unused) or a bare shape vector."""
    if isinstance(params, GammaMixtureParams):
        return params.shapes
    return _positive_vector(params, "shape vector", 1)


# ---------------------------------------------------------------------------
# Continuous laws: Dirichlet and its push-forwards
# ---------------------------------------------------------------------------


def dirichlet_log_pdf(params: DirichletParams, x: Composition) -> float:
    """log density of Dir(alpha) at a composition:
    ``-log B(alpha) + sum (alpha_i - 1) log x_i``."""
    if x.n != params.n:
        raise ValueError(f"dimension mismatch: alpha has {params.n} entries, x has {x.n}")
    return float(-params.log_normalizer() + ((params.alpha - 1.0) * np.log(x.entries)).sum())


def inverted_dirichlet_log_pdf(params: DirichletParams, y) -> float:
    """log density of the ratio push-forward of Dir(alpha):
    ``-log B(alpha) + sum_{i<n} (alpha_i - 1) log y_i - sum(alpha) log z``.
    """
    if y.n != params.n:
        raise ValueError(
            f"dimension mismatch: alpha has {params.n} entries, y has {y.entries.size}"
        )
    head = params.alpha[:-1]
    return float(
        -params.log_normalizer()
        + ((head - 1.0) * np.log(y.entries)).sum()
        - params.total * math.log(y.z)
    )


def alr_dirichlet_log_pdf(params: DirichletParams, y) -> float:
    """log density of the log-ratio push-forward of Dir(alpha):
    ``-log B(alpha) + sum_{i<n} alpha_i y_i - sum(alpha) log k``.
    """
    if y.n != params.n:
        raise ValueError(
            f"dimension mismatch: alpha has {params.n} entries, y has {y.entries.size}"
        )
    head = params.alpha[:-1]
    return float(-params.log_normalizer() + (head * y.entries).sum() - params.total * y.log_k)


def dirichlet_sample(params: DirichletParams, rng: np.random.Generator) -> Composition:
    """Draw from Dir(alpha) by normalizing independent Gamma(alpha_i, 1) draws.

    Deliberately the gamma-normalization construction, not stick
    breaking, so the sampler itself exercises the claim that normalized
    common-scale Gamma intensities are Dirichlet.
    """
    draws = np.array([gamma_sample(a, 1.0, rng) for a in params.alpha])
    return Composition(draws / draws.sum())


# ---------------------------------------------------------------------------
# Elementary samplers
# ---------------------------------------------------------------------------


def _gamma_std(shape: float, rng: np.random.Generator) -> float:
    # Marsaglia-Tsang squeeze method, valid for shape >= 1.
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = rng.standard_normal()
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = rng.random()
        if u < 1.0 - 0.0331 * x * x * x * x:
            return d * v
        if u > 0.0 and math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v


def gamma_sample(shape: float, scale: float, rng: np.random.Generator) -> float:
    """Draw from Gamma(shape, scale), mean shape * scale.

    Rejection sampling for any shape > 0: Marsaglia-Tsang for
    shape >= 1, boosted by ``U^(1/shape)`` below 1.
    """
    shape, scale = float(shape), float(scale)
    if not (math.isfinite(shape) and shape > 0.0 and math.isfinite(scale) and scale > 0.0):
        raise ValueError("gamma_sample requires shape > 0 and scale > 0")
    if shape < 1.0:
        u = rng.random()
        while u <= 0.0:
            u = rng.random()
        return scale * _gamma_std(shape + 1.0, rng) * u ** (1.0 / shape)
    return scale * _gamma_std(shape, rng)


def _poisson_inversion(rate: float, rng: np.random.Generator) -> int:
    # Sequential search of the CDF; fine for the rates <= 30 it is used at.
    u = rng.random()
    p = math.exp(-rate)
    cum = p
    k = 0
    cap = 200 + int(20.0 * rate)
    while u > cum and k < cap:
        k += 1
        p *= rate / k
        cum += p
    return k


def _poisson_ptrs(rate: float, rng: np.random.Generator) -> int:
    # Hormann's transformed rejection with squeeze, for large rates.
    slam = math.sqrt(rate)
    loglam = math.log(rate)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = rng.random() - 0.5
        v = rng.random()
        us = 0.5 - abs(u)
        k = int(math.floor((2.0 * a / us + b) * u + rate + 0.43))
        if us >= 0.07 and v <= v_r:
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        if v <= 0.0:
            continue
        if math.log(v * inv_alpha / (a / (us * us) + b)) <= k * loglam - rate - log_gamma(k + 1.0):
            return k


def poisson_sample(rate: float, rng: np.random.Generator) -> int:
    """Draw from Poisson(rate): CDF inversion for rate <= 30, transformed
    rejection above."""
    rate = float(rate)
    if not math.isfinite(rate) or rate <= 0.0:
        raise ValueError("poisson_sample requires a finite rate > 0")
    if rate <= 30.0:
        return _poisson_inversion(rate, rng)
    return _poisson_ptrs(rate, rng)


def negative_binomial_sample_via_mixture(
    R: float, theta: float, rng: np.random.Generator
) -> int:
    """Draw the count total by its mixture construction: Lambda ~
    Gamma(R, theta), then X ~ Poisson(Lambda).  Marginally
    NB(R, p = theta/(1+theta))."""
    lam = gamma_sample(R, theta, rng)
    if lam <= 0.0:
        return 0
    return poisson_sample(lam, rng)


def multinomial_sample(m: int, probs: Composition, rng: np.random.Generator) -> CountVector:
    """Draw Multinomial(m, probs) by sequential binomial thinning; the
    total is exactly m."""
    m = _as_count(m, "m")
    n = probs.n
    counts = np.zeros(n, dtype=np.int64)
    remaining = m
    # Suffix sums keep the conditional probabilities well scaled.
    suffix = np.concatenate([np.cumsum(probs.entries[::-1])[::-1], [0.0]])
    for i in range(n - 1):
        if remaining == 0:
            break
        p = probs.entries[i] / suffix[i]
        p = min(max(p, 0.0), 1.0)
        c = int(rng.binomial(remaining, p))
        counts[i] = c
        remaining -= c
    counts[n - 1] = remaining
    return CountVector(counts)


# ---------------------------------------------------------------------------
# Count mass functions
# ---------------------------------------------------------------------------


def negative_binomial_log_pmf(R: float, p: float, m: int) -> float:
    """log NB(R, p) mass at m:
    ``log C(m+R-1, m) + R log(1-p) + m log p``.

    ``p`` multiplies the p^m factor (so the mean is R p / (1-p)); this
    is the opposite of some libraries' convention.
    """
    R = float(R)
    p = float(p)
    if not math.isfinite(R) or R <= 0.0:
        raise ValueError("negative_binomial_log_pmf requires R > 0")
    if not math.isfinite(p) or not 0.0 < p < 1.0:
        raise ValueError(f"negative_binomial_log_pmf requires p in (0, 1), got {p!r}")
    m = _as_count(m, "m")
    return (
        log_gamma(m + R)
        - log_gamma(R)
        - log_gamma(m + 1.0)
        + R * math.log1p(-p)
        + m * math.log(p)
    )


def multinomial_log_pmf(m: int, probs: Composition, x: CountVector) -> float:
    """log Multinomial(m, probs) mass at counts x:
    ``log m! - sum log x_i! + sum x_i log p_i``."""
    m = _as_count(m, "m")
    if x.n != probs.n:
        raise ValueError(f"dimension mismatch: probs has {probs.n} entries, x has {x.n}")
    if x.total != m:
        raise ValueError(f"counts sum to {x.total}, expected total m={m}")
    counts = x.counts.astype(float)
    return float(
        log_gamma(m + 1.0)
        - sum(log_gamma(c + 1.0) for c in counts)
        + (counts * np.log(probs.entries)).sum()
    )


def dirichlet_multinomial_log_pmf(params, m: int, x: CountVector) -> float:
    """log Dirichlet-Multinomial mass at counts x for shape vector r:
    ``log m! - sum log x_i! + log G(R) - log G(m+R)
    + sum [log G(x_i+r_i) - log G(r_i)]``.

    ``params`` may be a GammaMixtureParams (its scale is irrelevant
    here) or a bare positive shape vector.
    """
    r = _as_shapes(params)
    m = _as_count(m, "m")
    if x.n != r.size:
        raise ValueError(f"dimension mismatch: shapes has {r.size} entries, x has {x.n}")
    if x.total != m:
        raise ValueError(f"counts sum to {x.total}, expected total m={m}")
    # fsum keeps the result exactly invariant under joint permutation of
    # shapes and counts.
    big_r = math.fsum(r)
    counts = x.counts.astype(float)
    per_component = math.fsum(
        log_gamma(c + ri) - log_gamma(ri) - log_gamma(c + 1.0)
        for c, ri in zip(counts, r)
    )
    return log_gamma(m + 1.0) + log_gamma(big_r) - log_gamma(m + big_r) + per_component


def beta_binomial_log_pmf(params: BetaBinomialParams, k: int) -> float:
    """log Beta-Binomial mass at k:
    ``log C(m, k) + log B(k+a, m-k+b) - log B(a, b)``."""
    k = _as_count(k, "k")
    m = params.m
    if k > m:
        raise ValueError(f"k={k} exceeds the number of trials m={m}")
    # Grouped so that the a == b case is exactly symmetric in k <-> m-k.
    log_choose = log_gamma(m + 1.0) - (log_gamma(k + 1.0) + log_gamma(m - k + 1.0))
    return log_choose + (log_beta(k + params.a, m - k + params.b) - log_beta(params.a, params.b))


def normalized_nb_log_pmf(
    params: GammaMixtureParams, component: int, k: int, m: int
) -> float:
    """log mass of the normalized count Y = X_component / S on the pair
    (k, m): ``NB(R, p) at m`` times ``BetaBinomial(r_c, R - r_c, m) at k``.

    Defined on pairs including m = 0 (k must then be 0; the
    Beta-Binomial factor is log 1 = 0), so the pair masses sum to 1.
    """
    if not 0 <= component < params.n:
        raise ValueError(f"component {component} out of range for n={params.n}")
    k = _as_count(k, "k")
    m = _as_count(m, "m")
    if k > m:
        raise ValueError(f"k={k} exceeds the total m={m}")
    a = float(params.shapes[component])
    b = params.total_shape - a
    if b <= 0.0:
        raise ValueError("normalized_nb_log_pmf needs at least two components to merge")
    out = negative_binomial_log_pmf(params.total_shape, params.success_prob, m)
    if m > 0:
        out += beta_binomial_log_pmf(BetaBinomialParams(a, b, m), k)
    return out


class AggregatedValueMass(NamedTuple):
    """Aggregated log mass of one rational value, plus the truncation
    bound M (largest total considered) used to compute it."""

    log_mass: float
    truncation_bound: int


def nb_truncation_bound(R: float, p: float, tail_mass: float = 1e-12) -> int:
    """Smallest M such that the NB(R, p) mass beyond M is below
    ``tail_mass``, found by summing the PMF."""
    if not 0.0 < tail_mass < 1.0:
        raise ValueError("tail_mass must lie in (0, 1)")
    # Linear-domain recurrence pmf(m+1) = pmf(m) * p * (m + R) / (m + 1).
    pmf = math.exp(negative_binomial_log_pmf(R, p, 0))
    remaining = 1.0 - pmf
    m = 0
    while remaining >= tail_mass:
        pmf *= p * (m + R) / (m + 1.0)
        remaining -= pmf
        m += 1
        if m > 10_000_000:
            raise RuntimeError("NB tail did not reach the requested mass bound")
    return m


def normalized_nb_value_pmf(
    params: GammaMixtureParams,
    component: int,
    value,
    tail_mass: float = 1e-12,
) -> AggregatedValueMass:
    """Aggregated log mass of the event Y = value, for a rational value.

    A rational value k/m is realized by every pair (j*k, j*m); their
    masses are summed for all such pairs with total <= M, where M is the
    smallest bound leaving NB tail mass below ``tail_mass``.

    ``value`` may be a ``fractions.Fraction`` or a ``(k, m)`` pair
    (reduced internally).  The m = 0 atom is not a rational value and is
    not included here; its log mass is ``R * log(1-p)``.
    """
    if isinstance(value, Fraction):
        frac = value
    else:
        k, m = value
        if _as_count(m, "value denominator") < 1:
            raise ValueError("value must have denominator m >= 1")
        frac = Fraction(_as_count(k, "value numerator"), int(m))
    if frac < 0 or frac > 1:
        raise ValueError(f"value must lie in [0, 1], got {frac}")
    num, den = frac.numerator, frac.denominator
    bound = nb_truncation_bound(params.total_shape, params.success_prob, tail_mass)
    terms = []
    j = 1
    while j * den <= bound:
        terms.append(normalized_nb_log_pmf(params, component, j * num, j * den))
        j += 1
    if not terms:
        return AggregatedValueMass(-math.inf, bound)
    return AggregatedValueMass(log_sum_exp(terms), bound)
