"""
Leave-one-group-out scan of cross-group interactions.

Entry (i, j) is the percent change in group j's loss caused by adding group
i back to the training set: 100 * (loss_all - loss_without_i) / loss_all.
Negative entries mean group i's data helps group j.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from core.exceptions import EvaluatorError, InvalidInputError
from core.parallel import ordered_map
from core.streams import Stream

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LogoResult:
    """Rows are withheld groups, columns are evaluated groups."""

    groups: tuple
    percent_change: np.ndarray
    standard_error: np.ndarray
    baseline_loss: np.ndarray
    trials: int


def _percent_changes(evaluator, counts, groups, stream):
    try:
        full = evaluator.evaluate(counts, stream)
    except EvaluatorError as exc:
        raise EvaluatorError(f"all groups: {exc}") from exc
    columns = full[list(groups)]
    if np.any(columns <= 0):
        raise EvaluatorError(
            "all groups: baseline loss must be positive for every "
            "evaluated group."
        )

    rows = []
    for withheld in groups:
        try:
            without = evaluator.evaluate(counts.without(withheld), stream)
        except EvaluatorError as exc:
            raise EvaluatorError(
                f"without group {withheld}: {exc}"
            ) from exc
        rows.append(100.0 * (columns - without[list(groups)]) / columns)

    return np.vstack(rows), columns


def leave_one_group_out(evaluator, counts, groups=None, trials=1, seed=0):
    """Mean percent-change matrix and its Monte Carlo standard errors.

    Each trial evaluates the full and the withheld training sets on the
    same Stream(seed, t), so the comparison is paired.
    """
    if groups is None:
        groups = range(counts.n_groups)
    groups = tuple(int(group) for group in groups)
    if len(groups) < 2:
        raise InvalidInputError("Leave-one-group-out needs >= 2 groups.")
    if len(set(groups)) != len(groups):
        raise InvalidInputError("Groups must be distinct.")
    if any(not 0 <= group < counts.n_groups for group in groups):
        raise InvalidInputError("Group index out of range.")
    if trials < 1:
        raise InvalidInputError("trials must be at least 1.")

    base = Stream(seed)
    results = ordered_map(
        lambda trial: _percent_changes(
            evaluator, counts, groups, base.child(trial)
        ),
        range(trials),
    )
    changes = np.stack([matrix for matrix, _ in results])
    baselines = np.vstack([columns for _, columns in results])
    logger.debug("Withheld %d groups over %d trials", len(groups), trials)

    if trials > 1:
        stderr = changes.std(axis=0, ddof=1) / math.sqrt(trials)
    else:
        stderr = np.full(changes.shape[1:], np.nan)

    return LogoResult(
        groups=groups,
        percent_change=changes.mean(axis=0),
        standard_error=stderr,
        baseline_loss=baselines.mean(axis=0),
        trials=trials,
    )


def logo_frame(result, labels):
    """Matrix as a DataFrame indexed by withheld and evaluated labels."""
    names = [labels[group] for group in result.groups]
    frame = pd.DataFrame(result.percent_change, index=names, columns=names)
    frame.index.name = "withheld"
    return frame
