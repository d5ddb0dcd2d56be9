"""Shared fixtures: expensive fitted objects reused across test modules."""

import numpy as np
import pytest

from causev import (
    EvCopula,
    LogisticPickands,
    estimate_pickands_raw,
    fit_pickands,
    fit_pair_model,
)
from causev.pipeline import RunConfig
from causev.simulate import sample_anm, sample_fixed_joint_tail, sample_logistic


def river_panel(n_stations=5, n_years=40, seed=0, carry=1.5, xi=0.4,
                noise=1.0):
    """Synthetic gauged cascade: heavy-tailed headwater pulses routed
    downstream with amplification and light local noise.

    Station j at day t is carry * station j-1 at day t-1 plus half-normal
    noise, so floods propagate strictly down the chain; the generative
    causal order is s0 -> s1 -> ... .
    """
    from causev.decluster import DailyPanel

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(99,)))
    n = n_years * 365
    head = (rng.uniform(size=n) ** -xi) - 1.0
    vals = np.empty((n, n_stations))
    vals[:, 0] = head + np.abs(rng.normal(0.0, noise, n))
    for j in range(1, n_stations):
        vals[1:, j] = carry * vals[:-1, j - 1] + np.abs(rng.normal(0.0, noise, n - 1))
        vals[0, j] = np.abs(rng.normal(0.0, noise))
    dates = np.datetime64("1970-01-01") + np.arange(n)
    return DailyPanel(dates, vals, tuple(f"s{k}" for k in range(n_stations)))


@pytest.fixture(scope="session")
def logistic_spline():
    """Constrained spline fitted to a symmetric logistic sample, alpha = 0.5."""
    rng = np.random.default_rng(42)
    u1, u2 = sample_logistic(0.5, 5000, rng)
    z1 = -1.0 / np.log(u1)
    z2 = -1.0 / np.log(u2)
    return fit_pickands(estimate_pickands_raw(z1, z2))


@pytest.fixture(scope="session")
def logistic_copula():
    """Closed-form logistic copula, alpha = 0.5."""
    return EvCopula(LogisticPickands(0.5))


@pytest.fixture(scope="session")
def pair_model_55():
    """Fitted pair model with exactly 55 joint exceedances (scenario 1b)."""
    rng = np.random.default_rng(11)
    x, y = sample_fixed_joint_tail(
        lambda n, r: sample_anm("1b", 0.1, n, r), 0.95, 55, rng)
    return fit_pair_model(x, y, RunConfig(threshold_prob=0.95))
