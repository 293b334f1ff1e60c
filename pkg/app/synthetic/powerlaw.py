"""
Ground-truth loss generator for a known scaling model.
"""

import numpy as np

from core.exceptions import InvalidInputError
from core.parallel import ordered_map
from core.streams import derive_seed, make_generator, standard_normal
from allocation.forecast import group_risk_array
from scaling.fitting import LossObservation


def power_law_loss_oracle(model, counts, noise_sd, seed, seed_tag=None):
    """One noisy observation per sampled group, truncated at zero.

    Group g draws its noise from stream (seed, g), or (seed, seed_tag, g)
    for a tagged replicate. Groups with n_g = 0 produce no observation.
    """
    if counts.n_groups != model.n_groups:
        raise InvalidInputError(
            "Counts and model disagree on the group count."
        )
    if not noise_sd >= 0:
        raise InvalidInputError("noise_sd must be non-negative.")

    observations = []
    for group, n_g in enumerate(counts.n_per_group):
        if n_g == 0:
            continue
        loss = float(group_risk_array(model[group], n_g, counts.n))
        if noise_sd > 0:
            path = (group,) if seed_tag is None else (seed_tag, group)
            rng = make_generator(seed, *path)
            loss += noise_sd * float(standard_normal(rng, 1)[0])
        observations.append(LossObservation(
            group=group,
            n_g=n_g,
            n=counts.n,
            loss=max(loss, 0.0),
            seed_tag=seed_tag,
        ))

    return observations


def simulate_design(model, points, noise_sd, seed):
    """Observations for every (counts, seed_tag) design point, in order.

    Point i uses seed derive_seed(seed, i).
    """
    batches = ordered_map(
        lambda item: power_law_loss_oracle(
            model,
            item[1].counts,
            noise_sd,
            derive_seed(seed, item[0]),
            seed_tag=item[1].seed_tag,
        ),
        list(enumerate(points)),
    )
    return [obs for batch in batches for obs in batch]


def noisy_group_loss(model, counts, noise_sd, rng):
    """Per-group losses at counts with Gaussian noise, truncated at zero.

    Unsampled groups are evaluated at n_g = 1.
    """
    n_g = np.maximum(np.asarray(counts.n_per_group, dtype=float), 1.0)
    n = max(counts.n, 1)
    losses = np.array([
        float(group_risk_array(model[group], n_g[group], n))
        for group in range(model.n_groups)
    ])
    if noise_sd > 0:
        losses += noise_sd * standard_normal(rng, model.n_groups)
    return np.maximum(losses, 0.0)
