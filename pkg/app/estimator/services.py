"""
Request-level estimator analysis shared by the estimator command and API.
"""

import logging

import numpy as np

from core.domain import Allocation, PopulationSpec
from estimator.montecarlo import gaussian_loss_sampler, monte_carlo_estimator
from estimator.weighted import (
    GroupLossMoments,
    WeightedEstimatorSpec,
    erm_weights,
    estimator_mean,
    estimator_variance,
    gdro_convex_weights,
    implicit_target,
    iw_weights,
    optimal_pair,
    optimal_pair_defined,
    strict_improvement_expected,
)

logger = logging.getLogger(__name__)

PAIR_FIELDS = (
    "w_star",
    "alpha_star",
    "mean_after",
    "variance_after",
    "strict_improvement_expected",
)


def resolve_weights(data, alpha):
    """(weights, high_variance flag) for the requested scheme."""
    scheme = data["weights"]
    if scheme == "iw":
        return iw_weights(PopulationSpec(data["gamma"]), alpha)
    if scheme == "erm":
        return erm_weights(len(alpha)), False
    if scheme == "gdro":
        losses = data.get("group_losses", data["means"])
        return gdro_convex_weights(losses), False
    return np.asarray(scheme, dtype=float), False


def optimal_pair_fields(spec, moments):
    """The (w*, alpha*) part of the result; null when a group has no spread.

    A supported group with zero loss variance leaves the optimal pair
    undefined, but the moments of the current estimator still stand.
    """
    if not optimal_pair_defined(spec, moments):
        logger.warning("Zero-variance group; optimal pair not reported")
        return dict.fromkeys(PAIR_FIELDS)

    w_star, alpha_star = optimal_pair(spec, moments)
    improved = WeightedEstimatorSpec(
        weights=w_star, alpha=alpha_star, n=spec.n
    )
    return {
        "w_star": [float(w) for w in w_star],
        "alpha_star": alpha_star.tolist(),
        "mean_after": estimator_mean(improved, moments),
        "variance_after": estimator_variance(improved, moments),
        "strict_improvement_expected": strict_improvement_expected(
            spec, w_star
        ),
    }


def run_estimator(data, seed=0):
    """Analyze the estimator for validated EstimatorRequestSerializer data."""
    alpha = Allocation(data["alpha"])
    weights, high_variance = resolve_weights(data, alpha)
    spec = WeightedEstimatorSpec(weights=weights, alpha=alpha, n=data["n"])
    moments = GroupLossMoments(mean=data["means"], variance=data["variances"])

    target = implicit_target(spec)
    pair = optimal_pair_fields(spec, moments)

    mc = None
    if data.get("mc_trials"):
        samplers = [
            gaussian_loss_sampler(mean, variance)
            for mean, variance in zip(moments.mean, moments.variance)
        ]
        summary = monte_carlo_estimator(
            spec, samplers, data["mc_trials"], data.get("seed", seed)
        )
        mc = {
            "trials": summary.trials,
            "mean": summary.sample_mean,
            "variance": summary.sample_variance,
            "mean_standard_error": summary.mean_standard_error,
            "variance_standard_error": summary.variance_standard_error,
        }

    return {
        "weights": [float(w) for w in spec.weights],
        "high_variance": bool(high_variance),
        "mean": estimator_mean(spec, moments),
        "variance": estimator_variance(spec, moments),
        "gamma_prime": [float(g) for g in target.gamma_prime],
        "c": target.c,
        **pair,
        "mc": mc,
    }
