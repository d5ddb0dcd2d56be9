"""Yearly block bootstrap and percentile intervals for the causal score."""

from dataclasses import dataclass

import numpy as np

from .errors import SingleBlock, TooManyFailedReplicates

MAX_FAILURE_FRACTION = 0.20
CRITICAL_SCORE = 0.5


@dataclass(frozen=True)
class ScoreInterval:
    """Point estimate with percentile bootstrap bounds."""

    point: float
    lower: float
    upper: float
    replicates: int
    failed: int
    significant: bool


def block_bootstrap_indices(block_ids, rng):
    """Resample whole blocks with replacement, preserving block sizes.

    Draws as many block labels as there are distinct blocks and
    concatenates the event indices of each drawn block.
    """
    block_ids = np.asarray(block_ids)
    labels = np.unique(block_ids)
    if labels.size < 2:
        raise SingleBlock("need at least two distinct blocks")
    members = {lab: np.flatnonzero(block_ids == lab) for lab in labels}
    drawn = rng.choice(labels, size=labels.size, replace=True)
    return np.concatenate([members[lab] for lab in drawn])


def _nearest_rank(sorted_values, p):
    """Nearest-rank quantile of an ascending array."""
    n = sorted_values.size
    idx = min(max(int(np.ceil(p * n)), 1), n) - 1
    return float(sorted_values[idx])


def bootstrap_causal_score(pipeline, block_ids, replicates=300, level=0.95,
                           seed=0, seed_key=()):
    """Percentile bootstrap interval for a causal-score pipeline.

    `pipeline` maps an index array over events to a score in [0,1]; it is
    first evaluated on the full data and then on `replicates` block
    resamples.  Replicates whose pipeline raises are dropped and counted.
    The per-replicate RNG is derived from (seed, seed_key, replicate) so
    parallel and serial execution agree.
    """
    block_ids = np.asarray(block_ids)
    n = block_ids.size
    point = pipeline(np.arange(n))
    scores = []
    failed = 0
    for rep in range(replicates):
        rng = np.random.default_rng(
            np.random.SeedSequence(seed, spawn_key=(*seed_key, rep)))
        idx = block_bootstrap_indices(block_ids, rng)
        try:
            scores.append(pipeline(idx))
        except Exception:
            failed += 1
    if failed > MAX_FAILURE_FRACTION * replicates:
        raise TooManyFailedReplicates(
            f"{failed}/{replicates} bootstrap replicates failed")
    scores = np.sort(np.asarray(scores))
    alpha = 1.0 - level
    lower = _nearest_rank(scores, alpha / 2.0)
    upper = _nearest_rank(scores, 1.0 - alpha / 2.0)
    significant = not (lower <= CRITICAL_SCORE <= upper)
    return ScoreInterval(point, lower, upper, len(scores), failed, significant)
