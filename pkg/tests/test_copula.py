import numpy as np
import pytest

from causev import EvCopula, LogisticPickands
from causev.errors import OutOfRange
from causev.pickands import IndependencePickands


class MaxPickands:
    """Comonotone bound A(w) = max(w, 1-w)."""

    def value(self, w):
        w = np.asarray(w, dtype=float)
        out = np.maximum(w, 1.0 - w)
        return out if out.ndim else float(out)

    def slope(self, w):
        w = np.asarray(w, dtype=float)
        out = np.where(w >= 0.5, 1.0, -1.0)
        return out if out.ndim else float(out)


def scalar_bisection(f, tau, tol=1e-12):
    """Independent scalar root bracketer for the conditional CDF."""
    lo, hi = 1e-12, 1.0 - 1e-12
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) >= tau:
            hi = mid
        else:
            lo = mid
    return hi


class TestCdf:
    def test_independence_product(self):
        c = EvCopula(IndependencePickands())
        assert abs(c.cdf(0.3, 0.7) - 0.21) < 1e-12

    def test_comonotone_min(self):
        c = EvCopula(MaxPickands())
        assert abs(c.cdf(0.3, 0.7) - 0.3) < 1e-12

    def test_logistic_closed_form(self, logistic_copula):
        # A(0.5) = sqrt(0.5), so C(0.5, 0.5) = 0.5 ** (2 * sqrt(0.5))
        expected = 0.5 ** (2.0 * 0.5 ** 0.5)
        assert abs(logistic_copula.cdf(0.5, 0.5) - expected) < 1e-12
        assert abs(expected - 0.37521) < 1e-5

    def test_uniform_margins(self, logistic_copula, logistic_spline):
        v = np.linspace(0.05, 0.95, 19)
        for c in (logistic_copula, EvCopula(logistic_spline)):
            assert np.max(np.abs(c.cdf(v, np.ones_like(v)) - v)) < 1e-8
            assert np.max(np.abs(c.cdf(np.ones_like(v), v) - v)) < 1e-8

    def test_two_increasing(self, logistic_spline):
        c = EvCopula(logistic_spline)
        g = np.linspace(0.05, 0.95, 10)
        vals = c.cdf(g[:, None], g[None, :])
        rect = vals[1:, 1:] - vals[:-1, 1:] - vals[1:, :-1] + vals[:-1, :-1]
        assert np.min(rect) >= -1e-8

    def test_max_stability(self, logistic_copula, logistic_spline):
        rng = np.random.default_rng(21)
        v1, v2 = rng.uniform(0.02, 0.98, size=(2, 50))
        for c in (logistic_copula, EvCopula(logistic_spline)):
            base = c.cdf(v1, v2)
            for k in (2, 3, 5):
                rooted = c.cdf(v1 ** (1.0 / k), v2 ** (1.0 / k)) ** k
                assert np.max(np.abs(rooted - base)) < 1e-8

    def test_out_of_range(self, logistic_copula):
        with pytest.raises(OutOfRange):
            logistic_copula.cdf(0.0, 0.5)


class TestPartials:
    def test_independence(self):
        c = EvCopula(IndependencePickands())
        g = np.linspace(0.1, 0.9, 9)
        for v2 in g:
            assert np.max(np.abs(c.partial_v1(g, v2) - v2)) < 1e-12
            assert np.max(np.abs(c.partial_v2(v2, g) - v2)) < 1e-12

    def test_upper_endpoint_limit(self, logistic_copula):
        assert abs(logistic_copula.partial_v1(0.5, 1.0 - 1e-12) - 1.0) < 1e-6

    def test_finite_difference(self, logistic_copula, logistic_spline):
        h = 1e-6
        g = np.linspace(0.1, 0.9, 9)
        for c in (logistic_copula, EvCopula(logistic_spline)):
            for v1 in g:
                for v2 in g:
                    fd1 = (c.cdf(v1 + h, v2) - c.cdf(v1 - h, v2)) / (2 * h)
                    fd2 = (c.cdf(v1, v2 + h) - c.cdf(v1, v2 - h)) / (2 * h)
                    assert abs(c.partial_v1(v1, v2) - fd1) < 1e-5
                    assert abs(c.partial_v2(v1, v2) - fd2) < 1e-5

    def test_monotone_in_nonconditioning_argument(self, logistic_spline):
        c = EvCopula(logistic_spline)
        v = np.linspace(0.01, 0.99, 200)
        for g in (0.2, 0.5, 0.8):
            assert np.all(np.diff(c.partial_v2(v, g)) >= -1e-12)
            assert np.all(np.diff(c.partial_v1(g, v)) >= -1e-12)


class TestInversion:
    def test_independence_identity(self):
        c = EvCopula(IndependencePickands())
        taus = np.linspace(0.1, 0.9, 9)
        for g in (0.2, 0.5, 0.8):
            assert np.max(np.abs(c.inverse_partial_v2(taus, g) - taus)) < 1e-9
            assert np.max(np.abs(c.inverse_partial_v1(taus, g) - taus)) < 1e-9

    def test_roundtrip(self, logistic_copula, logistic_spline):
        grid = np.linspace(0.1, 0.9, 9)
        for c in (logistic_copula, EvCopula(logistic_spline)):
            for g in grid:
                v = c.inverse_partial_v2(grid, g)
                assert np.max(np.abs(c.partial_v2(v, g) - grid)) < 1e-8
                v = c.inverse_partial_v1(grid, g)
                assert np.max(np.abs(c.partial_v1(g, v) - grid)) < 1e-8

    def test_against_scalar_bisection(self, logistic_copula):
        c = logistic_copula
        oracle = scalar_bisection(lambda v: c.partial_v2(v, 0.5), 0.5)
        assert abs(c.inverse_partial_v2(0.5, 0.5) - oracle) < 1e-9

    def test_rejects_boundary(self, logistic_copula):
        with pytest.raises(OutOfRange):
            logistic_copula.inverse_partial_v2(0.5, 1.0)


class TestChi:
    def test_independence(self):
        assert EvCopula(IndependencePickands()).chi() == 0.0

    def test_comonotone(self):
        assert EvCopula(MaxPickands()).chi() == 1.0

    def test_logistic(self, logistic_copula):
        assert abs(logistic_copula.chi() - (2.0 - 2.0 ** 0.5)) < 1e-12

    def test_fitted_spline_close_to_truth(self, logistic_spline):
        assert abs(EvCopula(logistic_spline).chi() - (2.0 - 2.0 ** 0.5)) < 0.05
