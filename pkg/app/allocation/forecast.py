"""
Per-group power-law risk model and the population risk it implies.

A group's risk at n_g own samples inside a training set of size n is
forecast as sigma2 * n_g**-p + tau2 * n**-q + delta. The exponents may differ
by group.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.domain import Allocation, check_group
from core.exceptions import InvalidInputError, UnboundedRiskError

logger = logging.getLogger(__name__)

EXPONENT_MAX = 2.0


@dataclass(frozen=True)
class GroupScaling:
    """Scaling parameters of one group; m_min is the trusted range floor."""

    sigma2: float
    p: float
    tau2: float = 0.0
    q: float = 1.0
    delta: float = 0.0
    m_min: int = 1

    def __post_init__(self):
        for name in ("sigma2", "p", "tau2", "q", "delta"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise InvalidInputError(
                    f"{name} must be finite and non-negative."
                )
            object.__setattr__(self, name, value)
        for name in ("p", "q"):
            if getattr(self, name) > EXPONENT_MAX:
                raise InvalidInputError(f"{name} must lie in [0, 2].")
        if int(self.m_min) < 1:
            raise InvalidInputError("m_min must be at least 1.")
        object.__setattr__(self, "m_min", int(self.m_min))

    def extrapolates(self, n_g):
        """True when n_g lies below the range the parameters were fit on."""
        return n_g < self.m_min

    def as_dict(self):
        return {
            "sigma2": self.sigma2,
            "p": self.p,
            "tau2": self.tau2,
            "q": self.q,
            "delta": self.delta,
            "m_min": self.m_min,
        }


@dataclass(frozen=True)
class ScalingModel:
    """One GroupScaling per group."""

    per_group: tuple

    def __post_init__(self):
        per_group = tuple(self.per_group)
        if not per_group:
            raise InvalidInputError("ScalingModel needs at least one group.")
        object.__setattr__(self, "per_group", per_group)

    @classmethod
    def shared_exponent(cls, sigma2, p):
        """Model with only the group term and one exponent for every group."""
        return cls(tuple(GroupScaling(sigma2=s, p=p) for s in sigma2))

    @property
    def n_groups(self):
        return len(self.per_group)

    def __getitem__(self, group):
        return self.per_group[group]

    def column(self, name):
        return np.array([getattr(g, name) for g in self.per_group])


def group_risk_array(scaling, n_g, n):
    """Vectorized forecast; inf where n_g == 0 and sigma2 > 0."""
    n_g = np.asarray(n_g, dtype=float)
    n = np.asarray(n, dtype=float)

    with np.errstate(divide="ignore"):
        own = np.where(
            scaling.sigma2 > 0,
            scaling.sigma2 * np.power(n_g, -scaling.p),
            0.0,
        )
        own = np.where((n_g <= 0) & (scaling.sigma2 > 0), np.inf, own)
        pooled = np.where(
            scaling.tau2 > 0,
            scaling.tau2 * np.power(n, -scaling.q),
            0.0,
        )

    return own + pooled + scaling.delta


def forecast_group_risk(model, group, n_g, n):
    """Forecast one group's risk at n_g own samples and n samples in total."""
    group = check_group(group, model.n_groups)
    scaling = model[group]

    if n_g <= 0 and scaling.sigma2 > 0:
        raise UnboundedRiskError(
            f"unbounded risk: group {group} has n_g={n_g} and sigma2 > 0"
        )
    if n <= 0 and scaling.tau2 > 0:
        raise UnboundedRiskError(
            f"unbounded risk: n={n} with tau2 > 0 for group {group}"
        )
    if n_g > n * (1 + 1e-12):
        raise InvalidInputError(f"n_g={n_g} exceeds n={n}.")
    if scaling.extrapolates(n_g):
        logger.debug(
            "Group %d forecast at n_g=%s extrapolates below m_min=%d",
            group, n_g, scaling.m_min,
        )

    return float(group_risk_array(scaling, n_g, n))


def forecast_population_risk(model, pop, alpha, n):
    """gamma-weighted sum of group forecasts at n_g = alpha_g * n.

    Returns inf when a group with sigma2 > 0 receives no samples.
    """
    _check_sizes(model, pop, alpha)
    total = 0.0

    for group, scaling in enumerate(model.per_group):
        n_g = alpha[group] * n
        if n_g <= 0 and scaling.sigma2 > 0:
            logger.info("Group %d is unsampled; population risk unbounded",
                        group)
            return math.inf
        total += pop.gamma[group] * forecast_group_risk(model, group, n_g, n)

    return total


def population_objective(model, pop, n):
    """Vectorized population risk over rows of an (m, k) allocation matrix."""
    gamma = pop.gamma

    def objective(alphas):
        alphas = np.atleast_2d(alphas)
        risk = np.zeros(len(alphas))
        for group, scaling in enumerate(model.per_group):
            risk += gamma[group] * group_risk_array(
                scaling, alphas[:, group] * n, n
            )
        return risk

    return objective


def population_risk_curve(model, pop, n, alphas_a):
    """Two-group forecasts over a grid of alpha_A values.

    Returns (group_risks, population_risk) with group_risks shaped (m, 2).
    Boundary points where a group is unsampled carry inf.
    """
    if model.n_groups != 2 or pop.n_groups != 2:
        raise InvalidInputError("Risk curves need exactly two groups.")

    alphas_a = np.asarray(alphas_a, dtype=float)
    group_risks = np.column_stack([
        group_risk_array(model[0], alphas_a * n, n),
        group_risk_array(model[1], (1.0 - alphas_a) * n, n),
    ])
    with np.errstate(invalid="ignore"):
        population = group_risks @ pop.gamma

    return group_risks, population


def _check_sizes(model, pop, alpha):
    if not model.n_groups == pop.n_groups == len(alpha):
        raise InvalidInputError(
            "Model, population and allocation disagree on the group count."
        )
    if not isinstance(alpha, Allocation):
        raise InvalidInputError("alpha must be an Allocation.")
