"""End-to-end pair scoring: thresholding, marginal fits, copula fit, score."""

from dataclasses import dataclass, field, replace

import numpy as np

from .copula import EvCopula
from .errors import TooFewExceedances
from .margins import ExceedanceSample, fit_gpd_mle, rank_transform, uniform_to_frechet
from .pickands import (
    DEFAULT_CENSOR_PROB,
    DEFAULT_DIRECTIONS,
    direction_grid,
    estimate_pickands_raw,
    fit_pickands,
)
from .scoring import PairTailModel, causal_score, integrated_scores, legendre_grid

MIN_JOINT_EXCEEDANCES = 10


@dataclass(frozen=True)
class RunConfig:
    """Configuration shared by the CLI commands and the pipelines."""

    threshold_prob: float = 0.90
    window_days: int = 9
    quad_order: int = 3
    boot_reps: int = 300
    level: float = 0.95
    seed: int = 0
    jobs: int = 1
    summer_only: bool = False
    paper_weights: bool = False
    check_loss: str = "printed"
    censor_prob: float = DEFAULT_CENSOR_PROB
    n_directions: int = DEFAULT_DIRECTIONS

    def __post_init__(self):
        if not 0 < self.threshold_prob < 1:
            raise ValueError("threshold_prob must lie in (0,1)")
        if not 0 < self.level < 1:
            raise ValueError("level must lie in (0,1)")
        if self.boot_reps < 1:
            raise ValueError("boot_reps must be at least 1")

    def with_seed(self, seed):
        return replace(self, seed=seed)


@dataclass(frozen=True)
class PairResult:
    """Outcome of scoring one ordered pair."""

    n_u: int
    threshold_x: float
    threshold_y: float
    quadruple: object
    score: float
    direction: str
    model: object = field(repr=False, compare=False, default=None)


def fit_pair_model(x, y, config=RunConfig()):
    """Fit margins and copula for a raw paired sample.

    Thresholds are the empirical `threshold_prob` quantiles; marginal GPDs
    are fitted to the joint exceedances, and the copula to the full sample
    via rank transforms and min-projection.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ux = float(np.quantile(x, config.threshold_prob))
    uy = float(np.quantile(y, config.threshold_prob))
    mask = (x > ux) & (y > uy)
    n_u = int(np.count_nonzero(mask))
    if n_u < MIN_JOINT_EXCEEDANCES:
        raise TooFewExceedances(
            f"only {n_u} joint exceedances; need {MIN_JOINT_EXCEEDANCES}")
    margin_x = fit_gpd_mle(ExceedanceSample(x[mask], ux))
    margin_y = fit_gpd_mle(ExceedanceSample(y[mask], uy))

    z1 = uniform_to_frechet(rank_transform(x))
    z2 = uniform_to_frechet(rank_transform(y))
    raw = estimate_pickands_raw(z1, z2, direction_grid(config.n_directions),
                                config.censor_prob)
    cop = EvCopula(fit_pickands(raw))
    return PairTailModel(margin_x, margin_y, cop, x[mask], y[mask])


def score_pair_values(x, y, config=RunConfig()):
    """Run the full scoring pipeline on a raw paired sample."""
    m = fit_pair_model(x, y, config)
    grid = legendre_grid(config.quad_order, config.paper_weights)
    quad = integrated_scores(m, grid, config.check_loss)
    decision = causal_score(quad)
    return PairResult(m.n_u, m.margin_x.threshold, m.margin_y.threshold,
                      quad, decision.score, decision.direction, m)
