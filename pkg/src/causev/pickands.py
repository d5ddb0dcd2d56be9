"""Nonparametric dependence estimation for bivariate joint tails.

Min-projection of unit-Frechet pairs onto directions of the simplex,
censored-exponential rate estimation, and a shape-constrained B-spline
fit of the resulting dependence-function estimates via linear
programming.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.interpolate import BSpline
from scipy.optimize import linprog

from .errors import (
    InfeasibleFit,
    NoExceedances,
    NonPositiveInput,
    TooFewDirections,
    TooFewPoints,
)

SPLINE_DEGREE = 3
N_INTERIOR_KNOTS = 12
ROUGHNESS_WEIGHT = 1e-3
DEFAULT_DIRECTIONS = 500
DEFAULT_CENSOR_PROB = 0.10
MIN_RATE_POINTS = 20
MIN_DIRECTIONS = 50


def direction_grid(n=DEFAULT_DIRECTIONS):
    """Unequally spaced directions in (0,1), denser near the endpoints.

    Quantiles of the arcsine density; the endpoint pinning of the
    dependence function concentrates curvature near 0 and 1.
    """
    p = np.arange(1, n + 1) / (n + 1.0)
    return np.sin(0.5 * np.pi * p) ** 2


@dataclass(frozen=True)
class RawPickandsEstimate:
    """Per-direction rate estimates of the dependence function."""

    omegas: np.ndarray
    rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "omegas", np.asarray(self.omegas, dtype=float))
        object.__setattr__(self, "rates", np.asarray(self.rates, dtype=float))
        if self.omegas.shape != self.rates.shape:
            raise ValueError("omegas and rates must have equal length")
        if np.any((self.omegas <= 0) | (self.omegas >= 1)):
            raise ValueError("directions must lie strictly inside (0,1)")
        if np.any(self.rates <= 0):
            raise ValueError("rates must be positive")


def min_project(z1, z2, omega):
    """Project a Frechet-scale pair sample onto direction omega.

    Returns elementwise min(e1/omega, e2/(1-omega)) with e_j = 1/z_j.
    Under an exact extreme-value copula the output is exponential with
    rate equal to the dependence function at omega.
    """
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if np.any(z1 <= 0) or np.any(z2 <= 0):
        raise NonPositiveInput("Frechet-scale values must be positive")
    return np.minimum(1.0 / (omega * z1), 1.0 / ((1.0 - omega) * z2))


def estimate_rate(projected, censor_prob=DEFAULT_CENSOR_PROB):
    """Censored-exponential MLE of the projection rate.

    Censors at the empirical `censor_prob` quantile q:
    rate = #{p_i <= q} / sum_i min(p_i, q).
    """
    p = np.asarray(projected, dtype=float)
    if p.size < MIN_RATE_POINTS:
        raise TooFewPoints(f"need at least {MIN_RATE_POINTS} points, got {p.size}")
    q = np.quantile(p, censor_prob)
    k = np.count_nonzero(p <= q)
    return k / np.sum(np.minimum(p, q))


def estimate_pickands_raw(z1, z2, omegas=None, censor_prob=DEFAULT_CENSOR_PROB):
    """Raw dependence-function estimates over a direction grid.

    Vectorizes min-projection and censored-rate estimation across all
    directions at once.
    """
    if omegas is None:
        omegas = direction_grid()
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if np.any(z1 <= 0) or np.any(z2 <= 0):
        raise NonPositiveInput("Frechet-scale values must be positive")
    if z1.size < MIN_RATE_POINTS:
        raise TooFewPoints(f"need at least {MIN_RATE_POINTS} pairs")
    e1 = 1.0 / z1
    e2 = 1.0 / z2
    om = omegas[:, None]
    proj = np.minimum(e1[None, :] * (1.0 / om), e2[None, :] * (1.0 / (1.0 - om)))
    q = np.quantile(proj, censor_prob, axis=1, keepdims=True)
    k = np.count_nonzero(proj <= q, axis=1)
    rates = k / np.sum(np.minimum(proj, q), axis=1)
    return RawPickandsEstimate(omegas, rates)


def _knot_vector(n_interior=N_INTERIOR_KNOTS, degree=SPLINE_DEGREE):
    interior = np.linspace(0.0, 1.0, n_interior + 2)[1:-1]
    return np.concatenate([np.zeros(degree + 1), interior, np.ones(degree + 1)])


def _basis_matrix(x, knots, degree, nu=0):
    """Matrix of B-spline basis (or derivative) values, shape (len(x), nbasis)."""
    n = len(knots) - degree - 1
    spl = BSpline(knots, np.eye(n), degree)
    if nu:
        spl = spl.derivative(nu)
    return spl(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class PickandsSpline:
    """Constrained cubic B-spline representation of a dependence function.

    Satisfies (up to solver tolerance) the endpoint conditions A(0)=A(1)=1,
    convexity, the simplex bounds max(w,1-w) <= A <= 1, and |A'| <= 1.
    """

    knots: np.ndarray
    coefficients: np.ndarray
    degree: int = SPLINE_DEGREE
    _spl: BSpline = field(init=False, repr=False, compare=False)
    _dspl: BSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "knots", np.asarray(self.knots, dtype=float))
        object.__setattr__(self, "coefficients",
                           np.asarray(self.coefficients, dtype=float))
        spl = BSpline(self.knots, self.coefficients, self.degree)
        object.__setattr__(self, "_spl", spl)
        object.__setattr__(self, "_dspl", spl.derivative())

    def value(self, w):
        return self._spl(w)

    def slope(self, w):
        return self._dspl(w)

    def validate(self, grid_size=1001, tol=1e-6):
        """Check all shape constraints on a uniform grid; returns True/False."""
        g = np.linspace(0.0, 1.0, grid_size)
        a = self.value(g)
        if abs(a[0] - 1.0) > tol or abs(a[-1] - 1.0) > tol:
            return False
        if np.any(a > 1.0 + tol) or np.any(a < np.maximum(g, 1.0 - g) - tol):
            return False
        if np.any(self._spl.derivative(2)(g) < -tol):
            return False
        if np.any(np.abs(self.slope(g)) > 1.0 + tol):
            return False
        return True

    def to_record(self):
        """Plain-text serialization: degree, knots, coefficients (17 sig digits)."""
        lines = [f"degree {self.degree}",
                 "knots " + " ".join(format(k, ".17g") for k in self.knots),
                 "coefficients " + " ".join(
                     format(c, ".17g") for c in self.coefficients)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_record(cls, text):
        fields = {}
        for line in text.strip().splitlines():
            key, _, rest = line.partition(" ")
            fields[key] = rest
        degree = int(fields["degree"])
        knots = np.array([float(v) for v in fields["knots"].split()])
        coefs = np.array([float(v) for v in fields["coefficients"].split()])
        return cls(knots, coefs, degree)


_LP_CACHE = {}


def _lp_structure(omegas, roughness):
    """Assemble (and cache) the LP pieces that depend only on the grid."""
    key = (omegas.tobytes(), roughness)
    cached = _LP_CACHE.get(key)
    if cached is not None:
        return cached
    knots = _knot_vector()
    degree = SPLINE_DEGREE
    nb = len(knots) - degree - 1
    m = omegas.size

    B = BSpline.design_matrix(omegas, knots, degree)
    unique_knots = np.unique(knots)
    D2 = _basis_matrix(unique_knots, knots, degree, nu=2)
    D1 = _basis_matrix(np.array([0.0, 1.0]), knots, degree, nu=1)

    n_aux = nb - 2
    n_var = nb + 2 * m + n_aux
    cost = np.concatenate([np.zeros(nb), 0.5 * np.ones(2 * m),
                           roughness * np.ones(n_aux)])

    # residual split: B c - r_plus + r_minus = rates
    A_eq = sparse.hstack([B, -sparse.eye(m), sparse.eye(m),
                          sparse.csr_matrix((m, n_aux))], format="csr")

    # second-difference magnitudes for the roughness penalty
    Dd = np.zeros((n_aux, nb))
    for i in range(n_aux):
        Dd[i, i:i + 3] = (1.0, -2.0, 1.0)
    Zr = sparse.csr_matrix((n_aux, 2 * m))
    d1_rows = np.zeros((2, n_var))
    d1_rows[0, :nb] = -D1[0]   # A'(0) >= -1
    d1_rows[1, :nb] = D1[1]    # A'(1) <= 1
    A_ub = sparse.vstack([
        sparse.hstack([sparse.csr_matrix(-D2),
                       sparse.csr_matrix((len(unique_knots), 2 * m + n_aux))]),
        sparse.csr_matrix(d1_rows),
        sparse.hstack([sparse.csr_matrix(Dd), Zr, -sparse.eye(n_aux)]),
        sparse.hstack([sparse.csr_matrix(-Dd), Zr, -sparse.eye(n_aux)]),
    ], format="csr")
    b_ub = np.concatenate([np.zeros(len(unique_knots)), [1.0, 1.0],
                           np.zeros(2 * n_aux)])

    bounds = ([(1.0, 1.0)] + [(None, None)] * (nb - 2) + [(1.0, 1.0)]
              + [(0.0, None)] * (2 * m + n_aux))
    cached = (knots, nb, cost, A_eq, A_ub, b_ub, bounds)
    if len(_LP_CACHE) < 8:
        _LP_CACHE[key] = cached
    return cached


def fit_pickands(raw, roughness=ROUGHNESS_WEIGHT):
    """Median-regression B-spline fit of raw rate estimates under shape constraints.

    Minimizes the L1 (check loss at tau = 0.5) deviation from the raw rates
    plus an L1 roughness penalty on second coefficient differences, subject to
    A(0) = A(1) = 1, nonnegative second derivative at the knots, and
    |A'| <= 1 at the endpoints.  For a cubic spline the second derivative is
    piecewise linear, so nonnegativity at the knots enforces convexity
    everywhere; convexity with the endpoint conditions then implies the
    simplex bounds max(w, 1-w) <= A <= 1 globally.
    """
    if raw.omegas.size < MIN_DIRECTIONS:
        raise TooFewDirections(
            f"need at least {MIN_DIRECTIONS} directions, got {raw.omegas.size}")
    knots, nb, cost, A_eq, A_ub, b_ub, bounds = _lp_structure(
        raw.omegas, roughness)
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=raw.rates,
                  bounds=bounds, method="highs-ipm")
    if res.status != 0:
        # interior-point is the fast path; fall back to the default simplex
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=raw.rates,
                      bounds=bounds, method="highs")
    if res.status != 0:
        raise InfeasibleFit(f"constrained spline fit failed: {res.message}")
    return PickandsSpline(knots, res.x[:nb])


class LogisticPickands:
    """Closed-form (asymmetric) logistic dependence function.

    The symmetric family is recovered at theta1 = theta2 = 1, and alpha = 1
    gives independence (A identically one).
    """

    def __init__(self, alpha, theta1=1.0, theta2=1.0):
        if not 0 < alpha <= 1:
            raise ValueError("alpha must lie in (0,1]")
        if not (0 <= theta1 <= 1 and 0 <= theta2 <= 1):
            raise ValueError("asymmetry parameters must lie in [0,1]")
        self.alpha = alpha
        self.theta1 = theta1
        self.theta2 = theta2

    def value(self, w):
        w = np.asarray(w, dtype=float)
        a, t1, t2 = self.alpha, self.theta1, self.theta2
        mix = ((t1 * w) ** (1.0 / a) + (t2 * (1.0 - w)) ** (1.0 / a)) ** a
        out = (1.0 - t1) * w + (1.0 - t2) * (1.0 - w) + mix
        return out if out.ndim else float(out)

    def slope(self, w):
        w = np.asarray(w, dtype=float)
        a, t1, t2 = self.alpha, self.theta1, self.theta2
        s1 = (t1 * w) ** (1.0 / a)
        s2 = (t2 * (1.0 - w)) ** (1.0 / a)
        base = (s1 + s2) ** (a - 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            d1 = np.where(w > 0, t1 ** (1.0 / a) * w ** (1.0 / a - 1.0), 0.0)
            d2 = np.where(w < 1, t2 ** (1.0 / a) * (1.0 - w) ** (1.0 / a - 1.0), 0.0)
        out = (1.0 - t1) - (1.0 - t2) + base * (d1 - d2)
        return out if out.ndim else float(out)


class IndependencePickands:
    """A identically one: the independence copula."""

    def value(self, w):
        return np.ones_like(np.asarray(w, dtype=float))

    def slope(self, w):
        return np.zeros_like(np.asarray(w, dtype=float))


def chi_empirical(x, y, u):
    """Empirical upper tail dependence coefficient at marginal level u."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValueError("x and y must have equal length")
    if x.size < 50:
        raise TooFewPoints("need at least 50 pairs")
    if not 0 < u < 1:
        raise ValueError("u must lie in (0,1)")
    n = x.size
    k = int(np.ceil(u * n))
    qx = np.sort(x)[k - 1]
    qy = np.sort(y)[k - 1]
    n_x = np.count_nonzero(x > qx)
    if n_x == 0:
        raise NoExceedances("no exceedances of the marginal quantile")
    joint = np.count_nonzero((x > qx) & (y > qy))
    return joint / n_x
