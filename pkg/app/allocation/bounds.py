"""
Checks on how the population-optimal allocation compares with prevalence.

With equal per-group constants, every group at or below the uniform share
1/|G| is allocated at least its prevalence. For two groups with a minority
A, the optimal share of A lies strictly between a prevalence-weighted and an
unweighted ratio of sigma2 ** (1 / (p + 1)).
"""

from dataclasses import dataclass

import numpy as np

from core.domain import PopulationSpec
from core.exceptions import InvalidInputError
from allocation.optimize import optimal_allocation_closed_form

# Slack for floating point when comparing alpha*_g with gamma_g.
_COMPARISON_SLACK = 1e-12


@dataclass(frozen=True)
class PrevalenceCheck:
    group: int
    gamma: float
    alpha_star: float
    holds: bool


@dataclass(frozen=True)
class MinorityBounds:
    lower: float
    upper: float
    alpha_star: float

    @property
    def strictly_inside(self):
        return self.lower < self.alpha_star < self.upper


def corollary1_check(pop, p):
    """For every group with gamma_g <= 1/|G|, test alpha*_g >= gamma_g."""
    if not p > 0:
        raise InvalidInputError("p must be positive.")

    k = pop.n_groups
    result = optimal_allocation_closed_form(pop, np.ones(k), p)
    rows = []

    for group in range(k):
        gamma = float(pop.gamma[group])
        if gamma > 1.0 / k + _COMPARISON_SLACK:
            continue
        alpha_star = result.alpha[group]
        rows.append(PrevalenceCheck(
            group=group,
            gamma=gamma,
            alpha_star=alpha_star,
            holds=alpha_star >= gamma - _COMPARISON_SLACK,
        ))

    return rows


def corollary2_bounds(gamma_a, sigma2_a, sigma2_b, p):
    """Bounds on the optimal share of the minority group A."""
    if not 0 < gamma_a < 0.5:
        raise InvalidInputError("group A must be the minority")
    if not (sigma2_a > 0 and sigma2_b > 0):
        raise InvalidInputError("sigma2_A and sigma2_B must be positive.")
    if not p > 0:
        raise InvalidInputError("p must be positive.")

    gamma_b = 1.0 - gamma_a
    exponent = 1.0 / (p + 1.0)
    s_a = sigma2_a ** exponent
    s_b = sigma2_b ** exponent

    lower = gamma_a * s_a / (gamma_a * s_a + gamma_b * s_b)
    upper = s_a / (s_a + s_b)
    result = optimal_allocation_closed_form(
        PopulationSpec([gamma_a, gamma_b]), [sigma2_a, sigma2_b], p
    )

    return MinorityBounds(
        lower=lower, upper=upper, alpha_star=result.alpha[0]
    )
