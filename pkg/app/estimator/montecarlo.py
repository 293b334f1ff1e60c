"""
Monte Carlo replay of the weighted estimator.

Trials are grouped into fixed-size blocks; block b draws from stream
(seed, b), so the simulated values do not depend on the worker count.
"""

import math
from dataclasses import dataclass

import numpy as np

from core.domain import counts_from_allocation
from core.exceptions import InvalidInputError
from core.parallel import ordered_map
from core.streams import make_generator, standard_normal

BLOCK_TRIALS = 1024


@dataclass(frozen=True)
class MonteCarloSummary:
    sample_mean: float
    sample_variance: float
    trials: int

    @property
    def mean_standard_error(self):
        return math.sqrt(self.sample_variance / self.trials)

    @property
    def variance_standard_error(self):
        """Normal-theory standard error of the sample variance."""
        return self.sample_variance * math.sqrt(2.0 / (self.trials - 1))


def gaussian_loss_sampler(mean, variance):
    """Sampler(rng, shape) drawing N(mean, variance) losses."""
    sd = math.sqrt(variance)

    def sample(rng, shape):
        return mean + sd * standard_normal(rng, shape)

    return sample


def constant_loss_sampler(value):
    def sample(rng, shape):
        return np.full(shape, float(value))

    return sample


def monte_carlo_estimator(spec, samplers, trials, seed):
    """Simulate L over independent trials using floored group counts.

    Each trial draws n_g = floor(alpha_g n) losses per group and averages
    w(g) * loss over the nominal n.
    """
    if trials < 2:
        raise InvalidInputError("Monte Carlo needs at least two trials.")
    if len(samplers) != spec.n_groups:
        raise InvalidInputError("Give one loss sampler per group.")

    counts = counts_from_allocation(spec.alpha, spec.n)
    blocks = [
        (block, min(BLOCK_TRIALS, trials - block * BLOCK_TRIALS))
        for block in range(math.ceil(trials / BLOCK_TRIALS))
    ]

    def run_block(item):
        block, size = item
        rng = make_generator(seed, block)
        totals = np.zeros(size)
        for group, count in enumerate(counts.n_per_group):
            if count == 0:
                continue
            losses = samplers[group](rng, (size, count))
            totals += spec.weights[group] * losses.sum(axis=1)
        return totals / spec.n

    values = np.concatenate(ordered_map(run_block, blocks))

    return MonteCarloSummary(
        sample_mean=float(values.mean()),
        sample_variance=float(values.var(ddof=1)),
        trials=trials,
    )
