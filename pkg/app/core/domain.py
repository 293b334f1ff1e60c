"""
Domain types shared by every app: allocations on the group simplex,
population prevalences, per-group counts and grouped samples.

Groups are dense integer indices 0..k-1. String labels only exist at the
command-line boundary.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import InvalidInputError, SamplingError
from core.streams import make_generator

logger = logging.getLogger(__name__)

SIMPLEX_TOLERANCE = 1e-9

# alpha_g * n is rounded to this many decimals before flooring so that
# 0.29 * 100 counts as 29 and not 28.
_COUNT_DECIMALS = 6


def _frozen_array(values, dtype=float):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def simplex_vector(values, name, strictly_positive=False):
    """Validate a probability vector and renormalize it exactly."""
    vector = np.asarray(values, dtype=float)
    if vector.ndim != 1 or vector.size == 0:
        raise InvalidInputError(f"{name} must be a non-empty vector.")
    if not np.all(np.isfinite(vector)):
        raise InvalidInputError(f"{name} must be finite.")
    if strictly_positive and np.any(vector <= 0):
        raise InvalidInputError(f"{name} entries must be positive.")
    if np.any(vector < 0):
        raise InvalidInputError(f"{name} entries must be non-negative.")

    total = vector.sum()
    if abs(total - 1.0) > SIMPLEX_TOLERANCE:
        raise InvalidInputError(
            f"{name} must sum to 1 (got {total!r})."
        )

    return _frozen_array(vector / total)


def check_group(group, n_groups):
    """Return group as an int index in [0, n_groups)."""
    index = int(group)
    if index != group or not 0 <= index < n_groups:
        raise InvalidInputError(
            f"Group {group!r} is not an index in [0, {n_groups})."
        )
    return index


@dataclass(frozen=True, eq=False)
class Allocation:
    """Relative training-set proportion of each group."""

    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "weights", simplex_vector(self.weights, "Allocation")
        )

    @classmethod
    def uniform(cls, n_groups):
        return cls(np.full(n_groups, 1.0 / n_groups))

    @property
    def n_groups(self):
        return self.weights.size

    def __len__(self):
        return self.weights.size

    def __getitem__(self, group):
        return float(self.weights[group])

    def tolist(self):
        return [float(value) for value in self.weights]


@dataclass(frozen=True, eq=False)
class PopulationSpec:
    """Population prevalence of each group."""

    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self,
            "gamma",
            simplex_vector(
                self.gamma, "PopulationSpec", strictly_positive=True
            ),
        )

    @property
    def n_groups(self):
        return self.gamma.size

    def as_allocation(self):
        return Allocation(self.gamma)


@dataclass(frozen=True)
class GroupCounts:
    """Per-group sample sizes; shortfall is n_requested - n after flooring."""

    n_per_group: tuple
    shortfall: int = 0

    def __post_init__(self):
        counts = tuple(int(value) for value in self.n_per_group)
        if not counts:
            raise InvalidInputError("GroupCounts needs at least one group.")
        if any(c != v for c, v in zip(counts, self.n_per_group)):
            raise InvalidInputError("Group counts must be integers.")
        if any(value < 0 for value in counts):
            raise InvalidInputError("Group counts must be non-negative.")
        object.__setattr__(self, "n_per_group", counts)

    @property
    def n(self):
        return sum(self.n_per_group)

    @property
    def n_groups(self):
        return len(self.n_per_group)

    def __getitem__(self, group):
        return self.n_per_group[group]

    def without(self, group):
        """Counts with one group withheld entirely."""
        counts = list(self.n_per_group)
        counts[group] = 0
        return GroupCounts(tuple(counts))


@dataclass(frozen=True, eq=False)
class GroupedSample:
    """Columnar training set S = {x_i, y_i, g_i}."""

    features: np.ndarray
    labels: np.ndarray
    groups: np.ndarray
    n_groups: int = field(default=1)

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        labels = np.asarray(self.labels, dtype=float).reshape(-1)
        groups = np.asarray(self.groups, dtype=int).reshape(-1)

        if not (len(features) == len(labels) == len(groups)):
            raise InvalidInputError("Sample columns differ in length.")
        if groups.size and (groups.min() < 0 or groups.max() >= self.n_groups):
            raise InvalidInputError("Sample has a group index out of range.")

        for name, value in (
            ("features", features),
            ("labels", labels),
            ("groups", groups),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    def __len__(self):
        return self.labels.size

    @property
    def dim(self):
        return self.features.shape[1]

    def counts(self):
        return GroupCounts(
            tuple(np.bincount(self.groups, minlength=self.n_groups).tolist())
        )


def allocation_from_counts(counts):
    """alpha_g = n_g / n."""
    if counts.n <= 0:
        raise InvalidInputError("empty sample")

    return Allocation(np.asarray(counts.n_per_group, dtype=float) / counts.n)


def counts_from_allocation(alpha, n):
    """n_g = floor(alpha_g * n); the dropped remainder is the shortfall."""
    n = int(n)
    if n < 0:
        raise InvalidInputError("Sample size must be non-negative.")

    scaled = np.round(alpha.weights * n, _COUNT_DECIMALS)
    counts = np.floor(scaled).astype(int)
    shortfall = n - int(counts.sum())
    if shortfall:
        logger.debug("Flooring allocation to n=%d drops %d", n, shortfall)

    return GroupCounts(tuple(counts.tolist()), shortfall=shortfall)


def sample_from_allocation(generators, alpha, n, seed):
    """Concatenate independent per-group draws sized by the allocation.

    generators[g](count, rng) must return (features, labels) with count rows.
    Group g draws from its own stream (seed, g), so a group's records do not
    depend on the other groups' counts.
    """
    counts = counts_from_allocation(alpha, n)
    features, labels, groups = [], [], []

    for group, count in enumerate(counts.n_per_group):
        if count == 0:
            continue
        if group >= len(generators) or generators[group] is None:
            raise SamplingError(
                f"No generator for group {group}.", group=group
            )

        try:
            x, y = generators[group](count, make_generator(seed, group))
        except Exception as exc:
            raise SamplingError(
                f"Generator for group {group} failed: {exc}", group=group
            ) from exc

        x = np.asarray(x, dtype=float).reshape(count, -1)
        y = np.asarray(y, dtype=float).reshape(-1)
        if y.size != count:
            raise SamplingError(
                f"Generator for group {group} returned {y.size} labels, "
                f"expected {count}.",
                group=group,
            )

        features.append(x)
        labels.append(y)
        groups.append(np.full(count, group))

    if not labels:
        return GroupedSample(
            np.empty((0, 0)), np.empty(0), np.empty(0, dtype=int),
            n_groups=alpha.n_groups,
        )

    return GroupedSample(
        np.vstack(features),
        np.concatenate(labels),
        np.concatenate(groups),
        n_groups=alpha.n_groups,
    )
