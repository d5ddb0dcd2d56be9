"""Causal direction between joint upper tails of paired extremes.

Marginal GPD tail models, nonparametric extreme-value copula estimation
through min-projection and constrained B-splines, quantile-score code
lengths, and the directional causal score, with a block bootstrap for
significance and network assembly over multivariate panels.
"""

from .copula import EvCopula
from .margins import (
    ExceedanceSample,
    GevModel,
    GpdModel,
    fit_gpd_mle,
    gpd_cdf,
    gpd_loglik,
    gpd_quantile,
    rank_transform,
    uniform_to_frechet,
)
from .pickands import (
    IndependencePickands,
    LogisticPickands,
    PickandsSpline,
    RawPickandsEstimate,
    chi_empirical,
    direction_grid,
    estimate_pickands_raw,
    estimate_rate,
    fit_pickands,
    min_project,
)
from .pipeline import PairResult, RunConfig, fit_pair_model, score_pair_values
from .resampling import ScoreInterval, block_bootstrap_indices, \
    bootstrap_causal_score
from .scoring import (
    CausalDecision,
    PairTailModel,
    QuantileGrid,
    ScoreQuadruple,
    causal_score,
    check_loss,
    code_length_report,
    conditional_score_x_given_y,
    conditional_score_y_given_x,
    integrated_scores,
    legendre_grid,
    marginal_score,
)

__version__ = "0.1.0"
