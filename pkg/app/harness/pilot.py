"""
Pilot-sample workflow: fit scaling laws on a small pilot, recommend a minmax
allocation for a larger collection, and compare it with fixed baselines.

Each trial t uses Stream(seed, t). The pilot design is evaluated on
(t, 0, point, replicate); every strategy at multiplier i is evaluated on
(t, 1, i), so strategies share their random draws within a trial.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.domain import (
    Allocation,
    GroupCounts,
    PopulationSpec,
    counts_from_allocation,
)
from core.exceptions import ConvergenceError, FitError, InvalidInputError
from core.parallel import ordered_map
from core.streams import Stream, derive_seed
from allocation.forecast import ScalingModel, population_risk_curve
from allocation.optimize import minmax_allocation
from scaling.design import (
    PILOT_FRACTIONS,
    PILOT_RATIOS,
    design_subset_grid,
    replicate_design,
)
from scaling.fitting import LossObservation, fit_group_scaling

logger = logging.getLogger(__name__)

MINMAX = "minmax"
GAMMA = "gamma"
EQUAL = "equal"
DEFAULT_MULTIPLIERS = (1.0, 2.0, 4.0, 8.0)
PILOT_STARTS = 8


def mean_and_se(values):
    """(mean, standard error); None entries when undefined."""
    if not values:
        return None, None
    array = np.asarray(values, dtype=float)
    if array.size < 2:
        return float(array.mean()), None
    return (
        float(array.mean()),
        float(array.std(ddof=1) / math.sqrt(array.size)),
    )


@dataclass(frozen=True, eq=False)
class PilotConfig:
    """baselines pairs a strategy name with its Allocation."""

    pilot_counts: GroupCounts
    population: PopulationSpec
    n_new_multipliers: tuple = DEFAULT_MULTIPLIERS
    baselines: tuple = ()
    trials: int = 10
    m_min: int = 1
    seed: int = 0
    ratios: tuple = PILOT_RATIOS
    fractions: tuple = PILOT_FRACTIONS
    replicates: int = 1
    starts: int = PILOT_STARTS

    def __post_init__(self):
        if self.pilot_counts.n_groups != 2 or self.population.n_groups != 2:
            raise InvalidInputError("The pilot workflow needs two groups.")
        if not self.n_new_multipliers:
            raise InvalidInputError("Give at least one multiplier.")
        if any(not m > 0 for m in self.n_new_multipliers):
            raise InvalidInputError("Multipliers must be positive.")
        if self.trials < 1:
            raise InvalidInputError("trials must be at least 1.")
        if self.replicates < 1:
            raise InvalidInputError("replicates must be at least 1.")
        if not self.baselines:
            object.__setattr__(self, "baselines", (
                (GAMMA, self.population.as_allocation()),
                (EQUAL, Allocation.uniform(2)),
            ))
        names = [name for name, _ in self.baselines]
        if MINMAX in names or len(set(names)) != len(names):
            raise InvalidInputError("Baseline names must be unique.")

    @property
    def strategies(self):
        return (MINMAX,) + tuple(name for name, _ in self.baselines)

    def n_new(self, multiplier):
        return int(round(multiplier * self.pilot_counts.n))


@dataclass(frozen=True)
class StrategySummary:
    multiplier: float
    n_new: int
    strategy: str
    max_group_loss: Optional[float]
    max_group_loss_se: Optional[float]
    population_loss: Optional[float]
    population_loss_se: Optional[float]


@dataclass(frozen=True)
class AlphaRange:
    """Spread of the recommended alpha_A across successful trials."""

    multiplier: float
    n_new: int
    low: Optional[float]
    high: Optional[float]
    clipped_trials: int


@dataclass(frozen=True, eq=False)
class PilotReport:
    summaries: tuple
    alpha_ranges: tuple
    trials: int
    failed_trials: int

    def summary(self, multiplier, strategy):
        for item in self.summaries:
            if item.multiplier == multiplier and item.strategy == strategy:
                return item
        raise KeyError((multiplier, strategy))


@dataclass(frozen=True)
class _TrialOutcome:
    alphas: tuple
    clipped: tuple
    losses: dict


def pilot_observations(config, evaluator, stream):
    """Evaluate the replicated pilot design once."""
    design = design_subset_grid(
        config.pilot_counts.n_per_group, config.ratios, config.fractions
    )
    points = replicate_design(design, config.replicates)

    observations = []
    for index, point in enumerate(points):
        losses = evaluator.evaluate(
            point.counts, stream.child(0, index, point.seed_tag)
        )
        for group, n_g in enumerate(point.counts.n_per_group):
            if n_g >= 1:
                observations.append(LossObservation(
                    group=group,
                    n_g=n_g,
                    n=point.counts.n,
                    loss=max(float(losses[group]), 0.0),
                    seed_tag=point.seed_tag,
                ))

    return observations


def fit_pilot_model(config, observations, trial):
    seed = derive_seed(config.seed, trial)
    return ScalingModel(tuple(
        fit_group_scaling(
            observations,
            group,
            m_min=config.m_min,
            starts=config.starts,
            seed=seed,
        ).params
        for group in range(2)
    ))


def _run_trial(config, evaluator, trial):
    stream = Stream(config.seed).child(trial)
    observations = pilot_observations(config, evaluator, stream)

    try:
        model = fit_pilot_model(config, observations, trial)
        recommendations = [
            minmax_allocation(model, config.n_new(multiplier))
            for multiplier in config.n_new_multipliers
        ]
    except (FitError, ConvergenceError) as exc:
        logger.warning("Pilot trial %d failed: %s", trial, exc)
        return None

    losses = {}
    for index, multiplier in enumerate(config.n_new_multipliers):
        n_new = config.n_new(multiplier)
        candidates = [(MINMAX, recommendations[index].alpha)]
        candidates.extend(config.baselines)
        for name, alpha in candidates:
            realized = evaluator.evaluate(
                counts_from_allocation(alpha, n_new), stream.child(1, index)
            )
            losses[(index, name)] = (
                float(realized.max()),
                float(realized @ config.population.gamma),
            )

    return _TrialOutcome(
        alphas=tuple(result.alpha[0] for result in recommendations),
        clipped=tuple(result.clipped for result in recommendations),
        losses=losses,
    )


def run_pilot_workflow(config, evaluator):
    """Aggregate the per-trial recommendations and realized losses.

    Failed trials are excluded from every aggregate and counted.
    """
    if evaluator.n_groups != 2:
        raise InvalidInputError("The pilot workflow needs two groups.")

    outcomes = ordered_map(
        lambda trial: _run_trial(config, evaluator, trial),
        range(config.trials),
    )
    succeeded = [outcome for outcome in outcomes if outcome is not None]
    failed = len(outcomes) - len(succeeded)
    if failed:
        logger.warning("%d of %d pilot trials failed", failed, config.trials)

    summaries = []
    ranges = []
    for index, multiplier in enumerate(config.n_new_multipliers):
        n_new = config.n_new(multiplier)
        for name in config.strategies:
            max_mean, max_se = mean_and_se(
                [outcome.losses[(index, name)][0] for outcome in succeeded]
            )
            pop_mean, pop_se = mean_and_se(
                [outcome.losses[(index, name)][1] for outcome in succeeded]
            )
            summaries.append(StrategySummary(
                multiplier=multiplier,
                n_new=n_new,
                strategy=name,
                max_group_loss=max_mean,
                max_group_loss_se=max_se,
                population_loss=pop_mean,
                population_loss_se=pop_se,
            ))

        alphas = [outcome.alphas[index] for outcome in succeeded]
        ranges.append(AlphaRange(
            multiplier=multiplier,
            n_new=n_new,
            low=min(alphas) if alphas else None,
            high=max(alphas) if alphas else None,
            clipped_trials=sum(o.clipped[index] for o in succeeded),
        ))

    return PilotReport(
        summaries=tuple(summaries),
        alpha_ranges=tuple(ranges),
        trials=config.trials,
        failed_trials=failed,
    )


@dataclass(frozen=True, eq=False)
class GridBaseline:
    """Mean losses over an alpha_A grid; unsampled marks n_g = 0 points.

    The forecast_* curves are the noiseless scaling-law risks, present when
    a population is given and the evaluator wraps a ScalingModel; they are
    inf where a group is unsampled.
    """

    alpha_grid_star: float
    alphas: np.ndarray
    max_group_loss: np.ndarray
    population_loss: Optional[np.ndarray]
    unsampled: np.ndarray
    forecast_max_group_loss: Optional[np.ndarray] = None
    forecast_population_loss: Optional[np.ndarray] = None


def alpha_grid(resolution):
    if not 0 < resolution <= 0.5:
        raise InvalidInputError("resolution must lie in (0, 0.5].")
    steps = int(math.floor(1.0 / resolution + 1e-9))
    alphas = [round(k * resolution, 12) for k in range(steps + 1)]
    if alphas[-1] < 1.0:
        alphas.append(1.0)
    return np.array(alphas)


def grid_baseline(evaluator, n_new, resolution, trials, seed,
                  population=None):
    """Evaluate every grid allocation over trials.

    Trial t uses Stream(seed, t) at every grid point. Ties in the mean
    max-group loss go to the smallest alpha_A.
    """
    if evaluator.n_groups != 2:
        raise InvalidInputError("Grid baselines need two groups.")
    if trials < 1:
        raise InvalidInputError("trials must be at least 1.")

    alphas = alpha_grid(resolution)
    base = Stream(seed)

    def evaluate_point(alpha_a):
        counts = counts_from_allocation(
            Allocation([alpha_a, 1.0 - alpha_a]), n_new
        )
        realized = np.vstack([
            evaluator.evaluate(counts, base.child(trial))
            for trial in range(trials)
        ])
        return counts, realized

    results = ordered_map(evaluate_point, alphas)

    max_loss = np.array([r.max(axis=1).mean() for _, r in results])
    unsampled = np.array([min(c.n_per_group) == 0 for c, _ in results])
    pop_loss = None
    if population is not None:
        pop_loss = np.array([
            (r @ population.gamma).mean() for _, r in results
        ])

    forecast_max = forecast_pop = None
    model = getattr(evaluator, "model", None)
    if population is not None and isinstance(model, ScalingModel):
        group_risks, forecast_pop = population_risk_curve(
            model, population, n_new, alphas
        )
        forecast_max = group_risks.max(axis=1)

    return GridBaseline(
        alpha_grid_star=float(alphas[int(np.argmin(max_loss))]),
        alphas=alphas,
        max_group_loss=max_loss,
        population_loss=pop_loss,
        unsampled=unsampled,
        forecast_max_group_loss=forecast_max,
        forecast_population_loss=forecast_pop,
    )
