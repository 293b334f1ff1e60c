"""
Fit requests shared by the fit command and API, and fit.json readers.
"""

from core.exceptions import InvalidInputError
from allocation.forecast import GroupScaling, ScalingModel
from scaling.fitting import (
    DEFAULT_STARTS,
    PARAMETERS,
    fit_diagnostics,
    fit_group_scaling,
)


def fit_payload(fit, observations):
    diagnostics = fit_diagnostics(fit, observations)
    params = fit.params.as_dict()

    return {
        "group": fit.group,
        **params,
        "stderr": fit.stderr,
        "sse": fit.residual_sse,
        "n_used": fit.n_observations_used,
        "n_excluded": fit.excluded_below_m_min,
        "diagnostics": {
            "residuals": [float(value) for value in diagnostics.residuals],
            "r_squared": diagnostics.r_squared,
            "flagged": list(diagnostics.flagged),
            "caveat": diagnostics.caveat,
        },
    }


def run_fit(observations, group=None, m_min=1, starts=DEFAULT_STARTS,
            seed=0):
    """Fit one group, or every group present, into a fit.json payload."""
    if group is None:
        groups = sorted({obs.group for obs in observations})
    else:
        groups = [group]

    fits = []
    for index in groups:
        fit = fit_group_scaling(
            observations, index, m_min=m_min, starts=starts, seed=seed
        )
        fits.append(fit_payload(fit, observations))

    return {"fits": fits}


def model_from_fit_report(payload):
    """ScalingModel from a fit.json covering groups 0..k-1."""
    try:
        fits = sorted(payload["fits"], key=lambda entry: entry["group"])
        groups = [int(entry["group"]) for entry in fits]
        if groups != list(range(len(groups))) or not groups:
            raise InvalidInputError(
                "Fit report must cover groups 0..k-1 exactly once."
            )
        return ScalingModel(tuple(
            GroupScaling(
                **{name: entry[name] for name in PARAMETERS},
                m_min=entry.get("m_min", 1),
            )
            for entry in fits
        ))
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"Malformed fit report: missing {exc}.")
