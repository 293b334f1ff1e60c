"""
Seeded random streams.

All randomness goes through numpy's Philox counter-based bit generator. A
stream is identified by a non-negative integer seed and a path of
non-negative integers (trial index, group index, ...); the path becomes the
SeedSequence spawn key, so sibling streams are statistically independent and
a stream's draws never depend on how many other streams exist or in which
order they are consumed.

Gaussian variates are produced by inverse-CDF transform of 53-bit uniforms
on the open interval (0, 1), so a stream's k-th normal is fixed regardless
of how draws are batched.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from core.exceptions import InvalidInputError

_MANTISSA = 2 ** 53


def _check_key(value, name):
    key = int(value)
    if key != value or key < 0:
        raise InvalidInputError(f"{name} must be a non-negative integer.")
    return key


def make_generator(seed, *path):
    """Return a Philox-backed Generator for stream (seed, path)."""
    seed = _check_key(seed, "seed")
    path = tuple(_check_key(key, "stream key") for key in path)
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=path)
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed, *path):
    """Return a 32-bit integer seed for a sub-computation."""
    seed = _check_key(seed, "seed")
    path = tuple(_check_key(key, "stream key") for key in path)
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=path)
    return int(sequence.generate_state(1)[0])


def open_uniform(rng, size):
    """Uniforms strictly inside (0, 1)."""
    raw = rng.integers(0, _MANTISSA, size=size, dtype=np.int64)
    return (raw.astype(np.float64) + 0.5) / _MANTISSA


def standard_normal(rng, size):
    """Standard normal variates via the inverse normal CDF."""
    return ndtri(open_uniform(rng, size))


@dataclass(frozen=True)
class Stream:
    """A named position in the stream tree."""

    seed: int
    path: tuple = ()

    def child(self, *keys):
        return Stream(self.seed, self.path + tuple(keys))

    def generator(self):
        return make_generator(self.seed, *self.path)
