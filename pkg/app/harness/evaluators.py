"""
Loss evaluators: realized per-group losses for a training set of given counts.

An evaluator stands in for "train a model on this many points per group and
measure its loss on each group". Every call receives its own Stream, so
callers control which evaluations share random draws.
"""

import abc
import logging

import numpy as np

from core.exceptions import EvaluatorError, InvalidInputError
from allocation.forecast import GroupScaling, ScalingModel
from scaling.presets import load_dataset_preset
from synthetic.linear import LinearGroupModel, trial_group_risk
from synthetic.powerlaw import noisy_group_loss

logger = logging.getLogger(__name__)

POWERLAW = "powerlaw"
LINEAR = "linear"
SHIFTED_LINEAR = "shifted-linear"
EVALUATOR_KINDS = (POWERLAW, LINEAR, SHIFTED_LINEAR)


class LossEvaluator(abc.ABC):
    """counts -> per-group loss."""

    n_groups = None

    @abc.abstractmethod
    def losses(self, counts, stream):
        """Per-group losses as an array of length n_groups."""

    def evaluate(self, counts, stream):
        if counts.n_groups != self.n_groups:
            raise InvalidInputError(
                f"Evaluator expects {self.n_groups} groups, got "
                f"{counts.n_groups}."
            )
        try:
            losses = np.asarray(self.losses(counts, stream), dtype=float)
        except EvaluatorError:
            raise
        except Exception as exc:
            raise EvaluatorError(
                f"Evaluator failed at counts {counts.n_per_group}: {exc}"
            ) from exc
        if losses.shape != (self.n_groups,) or not np.all(np.isfinite(losses)):
            raise EvaluatorError(
                f"Evaluator returned invalid losses at counts "
                f"{counts.n_per_group}."
            )
        return losses


class PowerLawEvaluator(LossEvaluator):
    """Noisy scaling-law oracle; an unsampled group is scored at n_g = 1."""

    def __init__(self, model, noise_sd=0.0):
        if noise_sd < 0:
            raise InvalidInputError("noise_sd must be non-negative.")
        self.model = model
        self.noise_sd = float(noise_sd)
        self.n_groups = model.n_groups

    def losses(self, counts, stream):
        return noisy_group_loss(
            self.model, counts, self.noise_sd, stream.generator()
        )


class LinearGroupEvaluator(LossEvaluator):
    """OLS with group dummies scored on eval_size fresh draws per group."""

    def __init__(self, model, eval_size=1000):
        if eval_size < 1:
            raise InvalidInputError("eval_size must be at least 1.")
        self.model = model
        self.eval_size = int(eval_size)
        self.n_groups = model.n_groups

    def losses(self, counts, stream):
        return trial_group_risk(self.model, counts, self.eval_size, stream)


class ShiftedLinearEvaluator(LinearGroupEvaluator):
    """Linear evaluator whose groups disagree on the coefficient vector."""

    def __init__(self, group_betas, intercepts, noise_sd, eval_size=1000):
        group_betas = np.asarray(group_betas, dtype=float)
        if group_betas.ndim != 2:
            raise InvalidInputError("group_betas must be a matrix.")
        model = LinearGroupModel(
            beta=group_betas.mean(axis=0),
            intercepts=intercepts,
            noise_sd=noise_sd,
            group_betas=group_betas,
        )
        super().__init__(model, eval_size=eval_size)


def evaluator_from_config(data):
    """Build an evaluator from validated EvaluatorSerializer data."""
    kind = data["kind"]

    if kind == POWERLAW:
        if "dataset" in data:
            model = load_dataset_preset(data["dataset"]).model
        else:
            model = ScalingModel(tuple(
                GroupScaling(**group) for group in data["groups"]
            ))
        return PowerLawEvaluator(model, noise_sd=data["noise_sd"])

    if kind == SHIFTED_LINEAR:
        return ShiftedLinearEvaluator(
            data["group_betas"],
            data["intercepts"],
            data["noise_sd"],
            eval_size=data["eval_size"],
        )

    model = LinearGroupModel(
        beta=data["beta"],
        intercepts=data["intercepts"],
        noise_sd=data["noise_sd"],
    )
    return LinearGroupEvaluator(model, eval_size=data["eval_size"])
