"""
Shared linear model with group-dependent intercepts.

    y = beta . x + c_g + N(0, noise_sd**2),  x ~ N(0, feature_cov)

Fitting ordinary least squares with one dummy column per group gives a group
risk of about noise_sd**2 * (1 + 1/n_g + d/(n - d - 1)): a group-specific
term decaying with n_g and a shared term decaying with n. The remaining
E[xbar_g' S^-1 xbar_g] term is only bounded, by noise_sd**2 * d / (n_g
(n - d - 2)), and is reported separately.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from core.domain import GroupedSample
from core.exceptions import InvalidInputError
from core.parallel import ordered_map
from core.streams import Stream, standard_normal

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LinearGroupModel:
    """Parameters of the generator.

    group_betas optionally replaces beta per group (rows indexed by group),
    which lets groups disagree about the shared coefficients. A noise_sd of
    zero makes labels deterministic.
    """

    beta: np.ndarray
    intercepts: np.ndarray
    noise_sd: float
    feature_cov: Optional[np.ndarray] = None
    group_betas: Optional[np.ndarray] = None

    def __post_init__(self):
        beta = np.array(self.beta, dtype=float).reshape(-1)
        intercepts = np.array(self.intercepts, dtype=float).reshape(-1)
        if intercepts.size == 0:
            raise InvalidInputError("Give one intercept per group.")
        if not (np.all(np.isfinite(beta)) and np.all(np.isfinite(intercepts))):
            raise InvalidInputError("beta and intercepts must be finite.")
        noise_sd = float(self.noise_sd)
        if not math.isfinite(noise_sd) or noise_sd < 0:
            raise InvalidInputError("noise_sd must be non-negative.")

        d = beta.size
        if self.feature_cov is None:
            cov = np.eye(d)
        else:
            cov = np.array(self.feature_cov, dtype=float)
            if cov.shape != (d, d):
                raise InvalidInputError(
                    f"feature_cov must be {d}x{d} to match beta."
                )
            if not np.allclose(cov, cov.T):
                raise InvalidInputError("feature_cov must be symmetric.")
        try:
            chol = np.linalg.cholesky(cov) if d else np.zeros((0, 0))
        except np.linalg.LinAlgError:
            raise InvalidInputError("feature_cov must be positive-definite.")

        if self.group_betas is None:
            group_betas = np.tile(beta, (intercepts.size, 1))
        else:
            group_betas = np.array(self.group_betas, dtype=float)
            if group_betas.shape != (intercepts.size, d):
                raise InvalidInputError(
                    "group_betas needs one row of len(beta) per group."
                )

        for name, value in (
            ("beta", beta),
            ("intercepts", intercepts),
            ("feature_cov", cov),
            ("group_betas", group_betas),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "noise_sd", noise_sd)
        object.__setattr__(self, "_chol", chol)

    @property
    def dim(self):
        return self.beta.size

    @property
    def n_groups(self):
        return self.intercepts.size

    def draw_group(self, group, count, rng):
        """(features, labels) for count records of one group."""
        d = self.dim
        features = standard_normal(rng, (count, d)) @ self._chol.T
        noise = self.noise_sd * standard_normal(rng, count)
        labels = (
            features @ self.group_betas[group]
            + self.intercepts[group]
            + noise
        )
        return features, labels


class OlsFit(NamedTuple):
    beta_hat: np.ndarray
    intercepts_hat: np.ndarray
    counts: tuple

    def intercept(self, group):
        """Fitted intercept; groups absent from training get the
        count-weighted mean of the fitted ones."""
        value = self.intercepts_hat[group]
        if np.isfinite(value):
            return float(value)
        weights = np.asarray(self.counts, dtype=float)
        present = weights > 0
        return float(
            np.dot(weights[present], self.intercepts_hat[present])
            / weights[present].sum()
        )

    def predict(self, features, group):
        return features @ self.beta_hat + self.intercept(group)


@dataclass(frozen=True)
class OlsRiskPrediction:
    per_group_risk: float
    base: float
    intercept_term: float
    shared_term: float
    mean_term_bound: float


def _check_counts(model, counts):
    if counts.n_groups != model.n_groups:
        raise InvalidInputError(
            "Counts and model disagree on the group count."
        )


def draw_group_sample(model, counts, stream):
    """Group g draws from stream.child(g)."""
    _check_counts(model, counts)
    features, labels, groups = [], [], []

    for group, count in enumerate(counts.n_per_group):
        if count == 0:
            continue
        x, y = model.draw_group(group, count, stream.child(group).generator())
        features.append(x)
        labels.append(y)
        groups.append(np.full(count, group))

    if not labels:
        return GroupedSample(
            np.empty((0, model.dim)), np.empty(0), np.empty(0, dtype=int),
            n_groups=model.n_groups,
        )

    return GroupedSample(
        np.vstack(features),
        np.concatenate(labels),
        np.concatenate(groups),
        n_groups=model.n_groups,
    )


def generate_linear_group_data(model, counts, seed):
    return draw_group_sample(model, counts, Stream(seed))


def ols_with_group_dummies(sample, allow_missing_groups=False):
    """OLS on [group dummies | centered features].

    Intercepts are reported on the original feature scale. With
    allow_missing_groups, groups without records get a nan intercept instead
    of making the design rank deficient.
    """
    counts = sample.counts().n_per_group
    present = [group for group, count in enumerate(counts) if count > 0]
    if not allow_missing_groups and len(present) != len(counts):
        missing = counts.index(0)
        raise InvalidInputError(
            f"rank deficient design: group {missing} has no records"
        )
    if not present:
        raise InvalidInputError("rank deficient design: empty sample")

    features = sample.features
    d = sample.dim
    if len(sample) < d + len(present):
        raise InvalidInputError(
            f"rank deficient design: n={len(sample)} < d + groups="
            f"{d + len(present)}"
        )

    mean = features.mean(axis=0)
    dummies = (sample.groups[:, None] == np.array(present)[None, :])
    design = np.hstack([dummies.astype(float), features - mean])

    coef, _, rank, _ = np.linalg.lstsq(design, sample.labels, rcond=None)
    if rank < design.shape[1]:
        raise InvalidInputError(
            f"rank deficient design: rank {rank} < {design.shape[1]} columns"
        )

    beta_hat = coef[len(present):]
    intercepts = np.full(len(counts), np.nan)
    intercepts[present] = coef[:len(present)] - float(mean @ beta_hat)

    return OlsFit(beta_hat=beta_hat, intercepts_hat=intercepts, counts=counts)


def predict_ols_group_risk(model, n_g, n):
    """Point prediction noise_sd**2 (1 + 1/n_g + d/(n - d - 1))."""
    d = model.dim
    if int(n_g) != n_g or int(n) != n:
        raise InvalidInputError("n_g and n must be integers.")
    if n <= d + 2:
        raise InvalidInputError(
            f"Wishart moment undefined for n={n} <= d + 2={d + 2}"
        )
    if not 1 <= n_g <= n:
        raise InvalidInputError("Need 1 <= n_g <= n.")

    sigma2 = model.noise_sd ** 2
    intercept_term = sigma2 / n_g
    shared_term = sigma2 * d / (n - d - 1)

    return OlsRiskPrediction(
        per_group_risk=sigma2 + intercept_term + shared_term,
        base=sigma2,
        intercept_term=intercept_term,
        shared_term=shared_term,
        mean_term_bound=sigma2 * d / (n_g * (n - d - 2)),
    )


def trial_group_risk(model, counts, eval_size, stream):
    """Squared error per group of one OLS fit on fresh draws.

    Training uses stream.child(0); group g is evaluated on stream.child(1, g),
    so evaluation draws are shared across different training counts.
    """
    sample = draw_group_sample(model, counts, stream.child(0))
    fit = ols_with_group_dummies(sample, allow_missing_groups=True)

    risks = np.empty(model.n_groups)
    for group in range(model.n_groups):
        rng = stream.child(1, group).generator()
        x, y = model.draw_group(group, eval_size, rng)
        risks[group] = float(np.mean((fit.predict(x, group) - y) ** 2))

    return risks


def empirical_group_risk(model, counts, eval_size, trials, seed):
    """Monte Carlo group risk averaged over independent train/eval trials."""
    if trials < 1:
        raise InvalidInputError("trials must be at least 1.")
    if eval_size < 1:
        raise InvalidInputError("eval_size must be at least 1.")
    _check_counts(model, counts)

    base = Stream(seed)
    per_trial = ordered_map(
        lambda trial: trial_group_risk(
            model, counts, eval_size, base.child(trial)
        ),
        range(trials),
    )
    logger.debug("Linear risk over %d trials at %s", trials, counts)

    return np.mean(np.vstack(per_trial), axis=0)
