"""Univariate extreme-value machinery.

Generalized Pareto and GEV tail models, maximum-likelihood fitting of
threshold exceedances, and rank transforms to pseudo-uniform and
unit-Frechet scales.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import rankdata

from .errors import (
    BelowThreshold,
    EmptyInput,
    InvalidProbability,
    OptimizerDiverged,
    OutOfRange,
    TooFewExceedances,
)

# Shape parameter box keeping the GPD likelihood regular.
XI_MIN = -0.5
XI_MAX = 1.0

# Below this |xi| the exponential (xi = 0) forms are used.
XI_ZERO_TOL = 1e-8

MIN_EXCEEDANCES = 10


@dataclass(frozen=True)
class GpdModel:
    """Shifted generalized Pareto law for values above a threshold."""

    threshold: float
    sigma: float
    xi: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def upper_endpoint(self):
        """Supremum of the support (finite only for xi < 0)."""
        if self.xi < -XI_ZERO_TOL:
            return self.threshold - self.sigma / self.xi
        return np.inf


@dataclass(frozen=True)
class GevModel:
    """Generalized extreme value law; used only as a simulation sampler."""

    mu: float
    sigma: float
    xi: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def quantile(self, tau):
        tau = np.asarray(tau, dtype=float)
        if np.any((tau <= 0) | (tau >= 1)):
            raise InvalidProbability("tau must lie in (0,1)")
        if abs(self.xi) < XI_ZERO_TOL:
            return self.mu - self.sigma * np.log(-np.log(tau))
        return self.mu + self.sigma * ((-np.log(tau)) ** (-self.xi) - 1.0) / self.xi


@dataclass(frozen=True)
class ExceedanceSample:
    """Values strictly above a common threshold."""

    values: np.ndarray
    threshold: float

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if np.any(self.values <= self.threshold):
            raise ValueError("every value must strictly exceed the threshold")

    @property
    def count(self):
        return self.values.size


def gpd_quantile(model, tau):
    """Quantile of the shifted GPD; accepts scalar or array tau in [0,1)."""
    tau = np.asarray(tau, dtype=float)
    if np.any((tau < 0) | (tau >= 1)):
        raise InvalidProbability("tau must lie in [0,1)")
    if abs(model.xi) < XI_ZERO_TOL:
        out = model.threshold - model.sigma * np.log1p(-tau)
    else:
        out = model.threshold + model.sigma * np.expm1(
            -model.xi * np.log1p(-tau)) / model.xi
    return out if out.ndim else float(out)


def gpd_cdf(model, x):
    """Distribution function of the shifted GPD at x >= threshold."""
    x = np.asarray(x, dtype=float)
    if np.any(x < model.threshold):
        raise BelowThreshold("x must not fall below the model threshold")
    z = (x - model.threshold) / model.sigma
    if abs(model.xi) < XI_ZERO_TOL:
        out = -np.expm1(-z)
    else:
        arg = 1.0 + model.xi * z
        # Values at/above a finite upper endpoint carry full mass.
        arg = np.maximum(arg, 0.0)
        with np.errstate(divide="ignore"):
            out = np.where(arg > 0.0, -np.expm1(-np.log(arg) / model.xi), 1.0)
    return out if out.ndim else float(out)


def gpd_loglik(model, sample):
    """GPD log-likelihood of an ExceedanceSample under `model`."""
    z = sample.values - model.threshold
    n = z.size
    if abs(model.xi) < XI_ZERO_TOL:
        return -n * np.log(model.sigma) - np.sum(z) / model.sigma
    arg = 1.0 + model.xi * z / model.sigma
    if np.any(arg <= 0):
        return -np.inf
    return -n * np.log(model.sigma) - (1.0 + 1.0 / model.xi) * np.sum(np.log(arg))


def _pwm_start(z):
    """Probability-weighted-moment starting values (sigma, xi) for excesses z."""
    z = np.sort(z)
    n = z.size
    b0 = z.mean()
    # a1 = E[Z (1 - F(Z))], empirical version with plotting positions.
    a1 = np.mean(z * (n - np.arange(1, n + 1)) / (n - 1.0))
    denom = b0 - 2.0 * a1
    if denom <= 0:
        return b0, 0.0
    xi = 2.0 - b0 / denom
    sigma = 2.0 * b0 * a1 / denom
    xi = float(np.clip(xi, XI_MIN + 0.05, XI_MAX - 0.05))
    sigma = max(sigma, 1e-8 * b0)
    if xi < 0.0:
        # keep the implied upper endpoint sigma/(-xi) above the sample
        # maximum so the likelihood is finite at the starting point
        sigma = max(sigma, 1.05 * (-xi) * z[-1])
    return sigma, xi


def fit_gpd_mle(sample):
    """Maximum-likelihood GPD fit of an exceedance sample.

    Optimizes over (log sigma, xi) with a Nelder-Mead simplex started at
    probability-weighted-moment estimates; xi is boxed to (XI_MIN, XI_MAX).
    """
    if sample.count < MIN_EXCEEDANCES:
        raise TooFewExceedances(
            f"need at least {MIN_EXCEEDANCES} exceedances, got {sample.count}")
    z = sample.values - sample.threshold
    if not np.all(np.isfinite(z)):
        raise ValueError("exceedance values must be finite")
    if np.ptp(z) == 0.0:
        raise OptimizerDiverged("degenerate sample: all excesses equal")

    # large finite penalty: infinities make the simplex bookkeeping emit
    # spurious invalid-value warnings
    penalty = 1e300

    def negll(theta):
        log_sigma, xi = theta
        if not (XI_MIN < xi < XI_MAX) or not (-30.0 < log_sigma < 30.0):
            return penalty
        sigma = np.exp(log_sigma)
        if abs(xi) < XI_ZERO_TOL:
            return z.size * log_sigma + np.sum(z) / sigma
        arg = 1.0 + xi * z / sigma
        if np.any(arg <= 0):
            return penalty
        return z.size * log_sigma + (1.0 + 1.0 / xi) * np.sum(np.log(arg))

    s0, x0 = _pwm_start(z)
    res = minimize(negll, x0=np.array([np.log(s0), x0]), method="Nelder-Mead",
                   options={"xatol": 1e-8, "fatol": 1e-9, "maxiter": 2000})
    if res.fun >= penalty:
        raise OptimizerDiverged("no interior optimum found")
    log_sigma, xi = res.x
    return GpdModel(sample.threshold, float(np.exp(log_sigma)), float(xi))


def rank_transform(values):
    """Map values to pseudo-uniforms rank/(n+1), midranks for ties."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise EmptyInput("need at least two values to rank")
    return rankdata(values, method="average") / (values.size + 1.0)


def uniform_to_frechet(u):
    """Map pseudo-uniforms in (0,1) to the unit-Frechet scale z = -1/log(u)."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise OutOfRange("pseudo-uniforms must lie strictly inside (0,1)")
    return -1.0 / np.log(u)
