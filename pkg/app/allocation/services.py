"""
Request-level allocation service shared by the optimize command and API.
"""

import logging

import numpy as np

from core.domain import PopulationSpec
from core.exceptions import ConvergenceError, InvalidInputError
from allocation.bounds import corollary2_bounds
from allocation.forecast import (
    GroupScaling,
    ScalingModel,
    population_objective,
)
from allocation.optimize import (
    grid_search_allocation,
    minmax_allocation,
    optimal_allocation_closed_form,
    optimal_allocation_general,
)
from allocation.serializers import MINMAX
from scaling.presets import load_dataset_preset

logger = logging.getLogger(__name__)

FALLBACK_GRID_RESOLUTION = 1e-3


def build_model(data):
    """(ScalingModel, PopulationSpec or None, n or None) from a request."""
    if "preset" in data:
        preset = load_dataset_preset(data["preset"])
        gamma = data.get("gamma")
        population = PopulationSpec(gamma) if gamma else preset.population
        return preset.model, population, data.get("n", preset.n)

    if "groups" in data:
        model = ScalingModel(tuple(
            GroupScaling(**group) for group in data["groups"]
        ))
    else:
        sigma2 = data["sigma2"]
        p = data["p"] * len(sigma2) if len(data["p"]) == 1 else data["p"]
        model = ScalingModel(tuple(
            GroupScaling(sigma2=s, p=exponent)
            for s, exponent in zip(sigma2, p)
        ))

    return model, PopulationSpec(data["gamma"]), data.get("n")


def _is_pure_group_term(model):
    """Shared exponent and no pooled or floor terms."""
    p = model.column("p")
    return (
        np.all(p == p[0])
        and not np.any(model.column("tau2"))
        and not np.any(model.column("delta"))
    )


def minority_bounds(model, population):
    """Two-group bounds on the minority share, when they apply."""
    if model.n_groups != 2:
        return None
    p = model.column("p")
    sigma2 = model.column("sigma2")
    gamma = population.gamma
    if (
        p[0] != p[1]
        or p[0] <= 0
        or np.any(sigma2 <= 0)
        or gamma[0] == gamma[1]
    ):
        return None

    minority = int(np.argmin(gamma))
    other = 1 - minority
    bounds = corollary2_bounds(
        gamma[minority], sigma2[minority], sigma2[other], p[0]
    )

    return {
        "group": minority,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "alpha_star": bounds.alpha_star,
    }


def _general_or_grid(model, population, n):
    try:
        return optimal_allocation_general(model, population, n)
    except ConvergenceError as exc:
        logger.warning("%s Falling back to a simplex grid search.", exc)
    return grid_search_allocation(
        population_objective(model, population, n),
        model.n_groups,
        FALLBACK_GRID_RESOLUTION,
    )


def run_optimize(data):
    """Optimize an allocation for validated OptimizeRequestSerializer data."""
    model, population, n = build_model(data)
    if model.n_groups != population.n_groups:
        raise InvalidInputError(
            "gamma and the model disagree on the group count."
        )

    if data["objective"] == MINMAX:
        if model.n_groups != 2:
            raise InvalidInputError(
                "minmax allocation supports exactly two groups."
            )
        result = minmax_allocation(model, n)
    elif n is None:
        if not _is_pure_group_term(model):
            raise InvalidInputError(
                "n is required unless every group shares p and has no "
                "pooled or floor term."
            )
        result = optimal_allocation_closed_form(
            population, model.column("sigma2"), model[0].p
        )
    else:
        result = _general_or_grid(model, population, n)

    return {
        "alpha_star": result.alpha.tolist(),
        "objective_value": result.objective_value,
        "method": result.method,
        "degenerate": result.degenerate,
        "clipped": result.clipped,
        "bounds": minority_bounds(model, population),
    }
