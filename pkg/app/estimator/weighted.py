"""
The group-weighted loss estimator L = (1/n) sum_i w(g_i) loss_i.

For a fixed predictor the estimator is determined by the per-group loss
moments, the group weights w and the allocation alpha. Any (w, alpha) pair
estimates risk under an implicit target distribution gamma' proportional to
w * alpha, scaled by c = sum_g alpha_g w_g. Among all pairs sharing gamma'
and c, alpha*_g ~ gamma'_g * sd_g with w*_g = c gamma'_g / alpha*_g has the
smallest variance.

Importance weighting (w = gamma / alpha) targets the population; for convex
losses the group DRO optimum is a weighting supported on the worst groups.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from core.domain import Allocation
from core.exceptions import InvalidInputError

logger = logging.getLogger(__name__)

GDRO_TIE_TOLERANCE = 1e-9
IW_HIGH_VARIANCE_RATIO = 5.0


def _vector(values, name):
    vector = np.array(values, dtype=float)
    if vector.ndim != 1 or vector.size == 0:
        raise InvalidInputError(f"{name} must be a non-empty vector.")
    if not np.all(np.isfinite(vector)):
        raise InvalidInputError(f"{name} must be finite.")
    vector.setflags(write=False)
    return vector


@dataclass(frozen=True, eq=False)
class GroupLossMoments:
    """Per-group mean and variance of the loss of a fixed predictor."""

    mean: np.ndarray
    variance: np.ndarray

    def __post_init__(self):
        mean = _vector(self.mean, "mean")
        variance = _vector(self.variance, "variance")
        if mean.shape != variance.shape:
            raise InvalidInputError("mean and variance differ in length.")
        if np.any(variance < 0):
            raise InvalidInputError("Loss variances must be non-negative.")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "variance", variance)

    @property
    def n_groups(self):
        return self.mean.size


@dataclass(frozen=True, eq=False)
class WeightedEstimatorSpec:
    weights: np.ndarray
    alpha: Allocation
    n: int

    def __post_init__(self):
        weights = _vector(self.weights, "weights")
        if np.any(weights < 0):
            raise InvalidInputError("Weights must be non-negative.")
        if weights.size != len(self.alpha):
            raise InvalidInputError(
                "weights and alpha differ in length."
            )
        if int(self.n) != self.n or self.n <= 0:
            raise InvalidInputError("n must be a positive integer.")
        if not float(np.dot(self.alpha.weights, weights)) > 0:
            raise InvalidInputError(
                "sum_g alpha_g w_g must be positive."
            )
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "n", int(self.n))

    @property
    def n_groups(self):
        return self.weights.size


@dataclass(frozen=True, eq=False)
class ImplicitTarget:
    gamma_prime: np.ndarray
    c: float


class OptimalPair(NamedTuple):
    w_star: np.ndarray
    alpha_star: Allocation


class ImportanceWeights(NamedTuple):
    weights: np.ndarray
    high_variance: bool


def _check_moments(spec, moments):
    if spec.n_groups != moments.n_groups:
        raise InvalidInputError(
            "Estimator spec and moments disagree on the group count."
        )


def implicit_target(spec):
    """gamma'_g = w_g alpha_g / c with c = sum_g w_g alpha_g."""
    mass = spec.alpha.weights * spec.weights
    c = float(mass.sum())
    return ImplicitTarget(gamma_prime=mass / c, c=c)


def estimator_mean(spec, moments):
    """E[L] = sum_g alpha_g w_g mean_g."""
    _check_moments(spec, moments)
    return float(np.sum(spec.alpha.weights * spec.weights * moments.mean))


def estimator_variance(spec, moments):
    """Var[L] = (1/n) sum_g alpha_g w_g**2 variance_g."""
    _check_moments(spec, moments)
    return float(
        np.sum(spec.alpha.weights * spec.weights ** 2 * moments.variance)
        / spec.n
    )


def optimal_pair_defined(spec, moments):
    """Whether every group in the support of gamma' has positive variance."""
    _check_moments(spec, moments)
    support = implicit_target(spec).gamma_prime > 0
    return bool(np.all(moments.variance[support] > 0))


def optimal_pair(spec, moments):
    """Variance-minimizing (w*, alpha*) with the same implicit target and c.

    Groups outside the support of gamma' keep alpha* = w* = 0.
    """
    if not optimal_pair_defined(spec, moments):
        raise InvalidInputError("zero-variance group")
    target = implicit_target(spec)
    support = target.gamma_prime > 0

    sd = np.sqrt(moments.variance)
    mass = np.where(support, target.gamma_prime * sd, 0.0)
    alpha_star = mass / mass.sum()

    w_star = np.zeros_like(alpha_star)
    w_star[support] = (
        target.c * target.gamma_prime[support] / alpha_star[support]
    )

    return OptimalPair(w_star=w_star, alpha_star=Allocation(alpha_star))


def strict_improvement_expected(spec, w_star):
    """Whether some group's weight is off w* by more than |G| / n_g."""
    alpha = spec.alpha.weights
    support = (alpha > 0) & (w_star > 0)
    gap = np.abs(1.0 - spec.weights[support] / w_star[support])
    threshold = spec.n_groups / (alpha[support] * spec.n)
    return bool(np.any(gap > threshold))


def erm_weights(n_groups):
    """Unweighted empirical risk: w = 1 for every group."""
    return np.ones(n_groups)


def iw_weights(pop, alpha):
    """w_g = gamma_g / alpha_g; unbiased for the population risk."""
    if pop.n_groups != len(alpha):
        raise InvalidInputError(
            "Population and allocation disagree on the group count."
        )
    if np.any(alpha.weights <= 0):
        missing = int(np.flatnonzero(alpha.weights <= 0)[0])
        raise InvalidInputError(f"unrepresented group {missing}")

    weights = pop.gamma / alpha.weights
    high_variance = bool(weights.max() > IW_HIGH_VARIANCE_RATIO)
    if high_variance:
        logger.warning(
            "Importance weight ratio %.3g exceeds %.3g",
            weights.max(), IW_HIGH_VARIANCE_RATIO,
        )

    return ImportanceWeights(weights=weights, high_variance=high_variance)


def gdro_convex_weights(group_empirical_losses):
    """Uniform weights over the groups with the largest empirical loss.

    This is the group-weighted objective the group DRO solution minimizes
    when the loss is convex in the model parameters; no such weighting
    exists in general for non-convex losses.
    """
    losses = _vector(group_empirical_losses, "group losses")
    worst = losses >= losses.max() - GDRO_TIE_TOLERANCE
    return worst / worst.sum()
