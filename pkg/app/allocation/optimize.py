"""
Allocation optimizers under the power-law risk model.

- optimal_allocation_closed_form: shared exponent, population objective.
- optimal_allocation_general: group-specific exponents, solved by bisection on
  the KKT multiplier (water-filling).
- minmax_allocation: two groups, minimizes the larger group forecast.
- grid_search_allocation: exhaustive (zooming) simplex grid, used as an
  oracle and for objectives without structure.
"""

import logging
import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from core.domain import Allocation
from core.exceptions import ConvergenceError, InvalidInputError
from allocation.forecast import (
    forecast_group_risk,
    forecast_population_risk,
)

logger = logging.getLogger(__name__)

MAX_BISECTION_STEPS = 200
SIMPLEX_SUM_TOLERANCE = 1e-10

CLOSED_FORM = "closed_form"
WATER_FILLING = "water_filling"
BISECTION = "bisection"
GRID = "grid"
METHODS = (CLOSED_FORM, WATER_FILLING, BISECTION, GRID)

# Full enumeration is used while the simplex grid has at most this many
# points; finer grids zoom in from a coarser level.
_GRID_POINT_BUDGET = 250_000
_ZOOM_FACTOR = 10
_ZOOM_RADIUS = 12


@dataclass(frozen=True, eq=False)
class OptimalAllocationResult:
    """Optimizer output.

    degenerate is set when every sigma2 is zero (any allocation is optimal).
    clipped is set when a minmax optimum sits at the one-sample boundary.
    """

    alpha: Allocation
    objective_value: float
    degenerate: bool = False
    method: str = CLOSED_FORM
    clipped: bool = False


def _check_population_inputs(model, pop):
    if model.n_groups != pop.n_groups:
        raise InvalidInputError(
            "Model and population disagree on the group count."
        )


def optimal_allocation_closed_form(pop, sigma2, p):
    """alpha*_g proportional to (gamma_g * sigma2_g) ** (1 / (p + 1)).

    objective_value is the allocation-dependent part of the approximated
    population risk, sum_g gamma_g sigma2_g alpha_g**-p, in units of n**-p.
    Groups with sigma2 = 0 receive nothing; if every sigma2 is zero the
    objective is flat and gamma is returned with degenerate=True.
    """
    sigma2 = np.asarray(sigma2, dtype=float)
    if sigma2.shape != pop.gamma.shape:
        raise InvalidInputError("sigma2 needs one entry per group.")
    if np.any(sigma2 < 0) or not np.all(np.isfinite(sigma2)):
        raise InvalidInputError("sigma2 must be finite and non-negative.")
    if not p > 0:
        raise InvalidInputError("The shared exponent p must be positive.")

    if not np.any(sigma2 > 0):
        return OptimalAllocationResult(
            alpha=pop.as_allocation(),
            objective_value=0.0,
            degenerate=True,
            method=CLOSED_FORM,
        )

    weights = np.power(pop.gamma * sigma2, 1.0 / (p + 1.0))
    alpha = weights / weights.sum()

    active = sigma2 > 0
    objective = float(np.sum(
        pop.gamma[active] * sigma2[active] * np.power(alpha[active], -p)
    ))

    return OptimalAllocationResult(
        alpha=Allocation(alpha),
        objective_value=objective,
        method=CLOSED_FORM,
    )


def optimal_allocation_general(model, pop, n):
    """Minimize the approximated population risk with per-group exponents.

    Stationarity gives alpha_g(lam) = (p_g gamma_g sigma2_g n**-p_g / lam)
    ** (1 / (p_g + 1)); the multiplier is found by bisection in log space
    until the allocations sum to one within SIMPLEX_SUM_TOLERANCE.
    """
    _check_population_inputs(model, pop)
    if not n > 0:
        raise InvalidInputError("n must be positive.")

    sigma2 = model.column("sigma2")
    p = model.column("p")
    active = sigma2 > 0

    if not np.any(active):
        alpha = pop.as_allocation()
        return OptimalAllocationResult(
            alpha=alpha,
            objective_value=forecast_population_risk(model, pop, alpha, n),
            degenerate=True,
            method=WATER_FILLING,
        )
    if np.any(p[active] <= 0):
        raise InvalidInputError(
            "Exponents must be positive for groups with sigma2 > 0."
        )

    log_scale = np.full(sigma2.shape, -np.inf)
    log_scale[active] = (
        np.log(p[active])
        + np.log(pop.gamma[active])
        + np.log(sigma2[active])
        - p[active] * math.log(n)
    )
    exponent = 1.0 / (p + 1.0)

    def allocations(log_lam):
        out = np.zeros_like(sigma2)
        out[active] = np.exp(exponent[active] * (log_scale[active] - log_lam))
        return out

    # At lo the cheapest group alone reaches alpha = 1; at hi every group
    # sits at or below 1/k.
    n_active = int(active.sum())
    lo = float(log_scale[active].min())
    hi = float(np.max(
        log_scale[active] + (p[active] + 1.0) * math.log(n_active)
    ))

    for _ in range(MAX_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        total = allocations(mid).sum()
        if abs(total - 1.0) <= SIMPLEX_SUM_TOLERANCE:
            break
        if total > 1.0:
            lo = mid
        else:
            hi = mid
    else:
        raise ConvergenceError(
            "Water-filling bisection did not converge after "
            f"{MAX_BISECTION_STEPS} steps; log-multiplier bracket "
            f"[{lo!r}, {hi!r}].",
            bracket=(lo, hi),
        )

    alpha = allocations(mid)
    alpha = Allocation(alpha / alpha.sum())

    return OptimalAllocationResult(
        alpha=alpha,
        objective_value=forecast_population_risk(model, pop, alpha, n),
        method=WATER_FILLING,
    )


def minmax_allocation(model, n):
    """Two-group allocation minimizing the larger forecast group risk.

    Group A's forecast falls and group B's rises as alpha_A grows, so the
    optimum equalizes them or, when one curve dominates everywhere, sits at
    the one-sample boundary alpha_A in {1/n, 1 - 1/n} (clipped=True).
    """
    if model.n_groups != 2:
        raise InvalidInputError(
            "minmax allocation supports exactly two groups."
        )
    n = float(n)
    if n < 2:
        raise InvalidInputError("minmax allocation needs n >= 2.")

    def losses(alpha_a):
        return (
            forecast_group_risk(model, 0, alpha_a * n, n),
            forecast_group_risk(model, 1, (1.0 - alpha_a) * n, n),
        )

    if model[0].sigma2 == 0 and model[1].sigma2 == 0:
        return OptimalAllocationResult(
            alpha=Allocation([0.5, 0.5]),
            objective_value=max(losses(0.5)),
            degenerate=True,
            method=BISECTION,
        )

    def gap(alpha_a):
        loss_a, loss_b = losses(alpha_a)
        return loss_a - loss_b

    lo, hi = 1.0 / n, 1.0 - 1.0 / n
    clipped = True

    if gap(lo) <= 0:
        alpha_a = lo
    elif gap(hi) >= 0:
        alpha_a = hi
    else:
        clipped = False
        for _ in range(MAX_BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            difference = gap(mid)
            if difference == 0:
                lo = hi = mid
                break
            if difference > 0:
                lo = mid
            else:
                hi = mid
        else:
            raise ConvergenceError(
                "minmax bisection did not converge after "
                f"{MAX_BISECTION_STEPS} steps; bracket [{lo!r}, {hi!r}].",
                bracket=(lo, hi),
            )
        alpha_a = 0.5 * (lo + hi)

    if clipped:
        logger.info("minmax optimum clipped to alpha_A=%r", alpha_a)

    return OptimalAllocationResult(
        alpha=Allocation([alpha_a, 1.0 - alpha_a]),
        objective_value=max(losses(alpha_a)),
        method=BISECTION,
        clipped=clipped,
    )


def _compositions(total, parts):
    """Every non-negative integer vector of length parts summing to total."""
    if parts == 1:
        return np.array([[total]])

    bars = np.array(
        list(combinations(range(total + parts - 1), parts - 1)),
        dtype=np.int64,
    )
    edges = np.column_stack([
        np.full(len(bars), -1),
        bars,
        np.full(len(bars), total + parts - 1),
    ])
    return np.diff(edges, axis=1) - 1


def _neighbourhood(center, total, radius):
    """Grid points within radius units of center (per free coordinate)."""
    parts = center.size
    offsets = np.array(
        list(product(range(-radius, radius + 1), repeat=parts - 1)),
        dtype=np.int64,
    )
    head = center[:-1] + offsets
    tail = total - head.sum(axis=1, keepdims=True)
    points = np.hstack([head, tail])
    return points[np.all(points >= 0, axis=1)]


def grid_search_allocation(objective, n_groups, resolution):
    """Minimize objective over the simplex grid of the given resolution.

    objective maps an (m, k) array of allocations to m values. Grids too
    large to enumerate are searched coarse-to-fine, refining around the best
    point by a factor of ten per level; for convex objectives this finds the
    grid minimizer.
    """
    if not 0 < resolution <= 1:
        raise InvalidInputError("resolution must lie in (0, 1].")
    units = int(round(1.0 / resolution))
    if units < 1 or n_groups < 1:
        raise InvalidInputError("Invalid grid.")

    level_units = units
    while (
        math.comb(level_units + n_groups - 1, n_groups - 1)
        > _GRID_POINT_BUDGET
        and level_units % _ZOOM_FACTOR == 0
        and level_units > _ZOOM_FACTOR
    ):
        level_units //= _ZOOM_FACTOR

    def best_of(points, total):
        values = np.asarray(objective(points / total), dtype=float)
        values = np.where(np.isnan(values), np.inf, values)
        index = int(np.argmin(values))
        return points[index], float(values[index])

    best, value = best_of(_compositions(level_units, n_groups), level_units)

    while level_units < units:
        level_units *= _ZOOM_FACTOR
        center = best * _ZOOM_FACTOR
        points = _neighbourhood(center, level_units, _ZOOM_RADIUS)
        best, value = best_of(points, level_units)

    return OptimalAllocationResult(
        alpha=Allocation(best / units),
        objective_value=value,
        method=GRID,
    )
