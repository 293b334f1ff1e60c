"""
Subsetting designs that produce the (n_A, n_B) points a scaling fit needs.

A subset grid varies the ratio between the groups and the overall size: for
ratio r the largest subset keeps r minority points per majority point, and
every fraction x shrinks both groups to x of that size. Each ratio is used
with either group in the minority role. A fixed-n design keeps n_A + n_B
constant and walks the allocation across the evaluation grid.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

from core.domain import GroupCounts
from core.exceptions import InvalidInputError

logger = logging.getLogger(__name__)

# Guards floor() against products like 0.3 * 10000 = 2999.9999999999995.
_FLOOR_SLACK = 1e-9

SUBSET_RATIOS = (0.125, 0.25, 0.5, 1.0)
SUBSET_FRACTIONS = (
    0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25,
    0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0,
)
PILOT_RATIOS = (0.0625, 0.125, 0.25, 0.5, 1.0)
PILOT_FRACTIONS = SUBSET_FRACTIONS[1:]

FIXED_N_ALPHAS = (
    0.0, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
    0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.98, 0.99, 1.0,
)


@dataclass(frozen=True)
class SkipRule:
    """Drop a fraction for every ratio strictly below below_ratio."""

    fraction: float
    below_ratio: float = 1.0

    def applies(self, ratio, fraction):
        return (
            math.isclose(fraction, self.fraction)
            and ratio < self.below_ratio
        )


DEFAULT_SKIP_RULES = (SkipRule(fraction=0.01, below_ratio=1.0),)


class DesignPoint(NamedTuple):
    counts: GroupCounts
    seed_tag: int


def _unit_interval(values, name):
    values = [float(value) for value in values]
    if not values:
        raise InvalidInputError(f"{name} must not be empty.")
    if any(not 0 < value <= 1 for value in values):
        raise InvalidInputError(f"{name} must lie in (0, 1].")
    return values


def _floor(value):
    return int(math.floor(value + _FLOOR_SLACK))


def design_subset_grid(n_max_per_group, ratios=SUBSET_RATIOS,
                       fractions=SUBSET_FRACTIONS,
                       skip_rules=DEFAULT_SKIP_RULES):
    """Deduplicated (n_A, n_B) pairs of the ratio x fraction design."""
    n_max = tuple(int(value) for value in n_max_per_group)
    if len(n_max) != 2:
        raise InvalidInputError("Subset designs need exactly two groups.")
    if min(n_max) < 1:
        raise InvalidInputError("Each group needs at least one point.")
    ratios = _unit_interval(ratios, "ratios")
    fractions = _unit_interval(fractions, "fractions")

    design = []
    seen = set()

    for ratio in ratios:
        for fraction in fractions:
            if any(rule.applies(ratio, fraction) for rule in skip_rules):
                continue
            for minority in (0, 1):
                majority = 1 - minority
                n_major = min(n_max[majority], n_max[minority] / ratio)
                counts = [0, 0]
                counts[majority] = _floor(fraction * n_major)
                counts[minority] = _floor(fraction * ratio * n_major)
                pair = tuple(counts)

                if min(pair) < 1:
                    logger.debug("Skipping empty subset %s", pair)
                    continue
                if pair not in seen:
                    seen.add(pair)
                    design.append(GroupCounts(pair))

    if not design:
        raise InvalidInputError("Subset design is empty after skip rules.")

    return design


def fixed_n_design(n, alphas=FIXED_N_ALPHAS):
    """Two-group counts with n_A + n_B = n across the allocation grid."""
    n = int(n)
    if n < 1:
        raise InvalidInputError("n must be positive.")

    design = []
    for alpha in alphas:
        if not 0 <= alpha <= 1:
            raise InvalidInputError("Allocations must lie in [0, 1].")
        n_a = _floor(alpha * n)
        design.append(GroupCounts((n_a, n - n_a)))

    return design


def replicate_design(design, seeds):
    """Repeat every design point once per seed tag."""
    if seeds < 1:
        raise InvalidInputError("seeds must be at least 1.")

    return [
        DesignPoint(counts=counts, seed_tag=tag)
        for counts in design
        for tag in range(seeds)
    ]
