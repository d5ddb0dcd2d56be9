"""Extreme-value copula calculus on top of a Pickands dependence function.

CDF, partial derivatives, inverse conditional CDFs, and the tail
dependence coefficient chi.  Works with any object exposing
``value(w)`` and ``slope(w)``, e.g. a fitted PickandsSpline or a
closed-form family.
"""

import numpy as np

from .errors import NoRoot, OutOfRange

# Bracket for conditional-CDF inversion; quantiles this deep into the
# corners are indistinguishable from the bounds at double precision.
_BRACKET_EPS = 1e-12
_BISECT_ITERS = 200


class EvCopula:
    """Bivariate extreme-value copula parameterized by its Pickands function."""

    def __init__(self, pickands):
        self.pickands = pickands

    def cdf(self, v1, v2):
        v1 = np.asarray(v1, dtype=float)
        v2 = np.asarray(v2, dtype=float)
        if np.any((v1 <= 0) | (v1 > 1)) or np.any((v2 <= 0) | (v2 > 1)):
            raise OutOfRange("copula arguments must lie in (0,1]")
        l1 = np.log(v1)
        l2 = np.log(v2)
        s = l1 + l2
        # At (1,1) the exponent is 0 regardless of A; avoid 0/0 in w.
        w = np.where(s < 0, l1 / np.where(s < 0, s, -1.0), 0.5)
        out = np.exp(s * self.pickands.value(w))
        return out if out.ndim else float(out)

    def _partial(self, v1, v2, which):
        if np.any((v1 <= 0) | (v1 >= 1)) or np.any((v2 <= 0) | (v2 >= 1)):
            raise OutOfRange("copula arguments must lie in (0,1)")
        return self._partial_raw(v1, v2, which)

    def _partial_raw(self, v1, v2, which):
        l1 = np.log(v1)
        l2 = np.log(v2)
        s = l1 + l2
        w = l1 / s
        a = self.pickands.value(w)
        da = self.pickands.slope(w)
        c = np.exp(s * a)
        if which == 1:
            out = c * (a + (l2 / s) * da) / v1
        else:
            out = c * (a - (l1 / s) * da) / v2
        out = np.clip(out, 0.0, 1.0)
        return out if out.ndim else float(out)

    def partial_v1(self, v1, v2):
        """dC/dv1, the conditional CDF of V2 given V1 = v1; clamped to [0,1]."""
        return self._partial(np.asarray(v1, dtype=float),
                             np.asarray(v2, dtype=float), 1)

    def partial_v2(self, v1, v2):
        """dC/dv2, the conditional CDF of V1 given V2 = v2; clamped to [0,1]."""
        return self._partial(np.asarray(v1, dtype=float),
                             np.asarray(v2, dtype=float), 2)

    def _invert(self, f, tau):
        """Vectorized bisection for the smallest v with f(v) >= tau."""
        tau = np.asarray(tau, dtype=float)
        lo = np.full(tau.shape, _BRACKET_EPS)
        hi = np.full(tau.shape, 1.0 - _BRACKET_EPS)
        if np.any(f(lo) > tau) or np.any(f(hi) < tau):
            raise NoRoot("monotone map does not attain tau within the bracket")
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            high = f(mid) >= tau
            hi = np.where(high, mid, hi)
            lo = np.where(high, lo, mid)
            if np.max(hi - lo) < 1e-13:
                break
        return hi

    def inverse_partial_v2(self, tau, g):
        """Solve dC/dv2 (v, g) = tau for v at fixed second argument g."""
        tau, g = np.broadcast_arrays(np.asarray(tau, dtype=float),
                                     np.asarray(g, dtype=float))
        if np.any((tau <= 0) | (tau >= 1)) or np.any((g <= 0) | (g >= 1)):
            raise OutOfRange("tau and g must lie in (0,1)")
        out = self._invert(lambda v: self._partial_raw(v, g, 2), tau)
        return out if out.ndim else float(out)

    def inverse_partial_v1(self, tau, g):
        """Solve dC/dv1 (g, v) = tau for v at fixed first argument g."""
        tau, g = np.broadcast_arrays(np.asarray(tau, dtype=float),
                                     np.asarray(g, dtype=float))
        if np.any((tau <= 0) | (tau >= 1)) or np.any((g <= 0) | (g >= 1)):
            raise OutOfRange("tau and g must lie in (0,1)")
        out = self._invert(lambda v: self._partial_raw(g, v, 1), tau)
        return out if out.ndim else float(out)

    def chi(self):
        """Tail dependence coefficient 2(1 - A(1/2)), clipped to [0,1]."""
        return float(np.clip(2.0 * (1.0 - self.pickands.value(0.5)), 0.0, 1.0))
