"""
Config-level entry points for the pilot and leave-one-group-out workflows.
"""

from core.domain import Allocation, GroupCounts, PopulationSpec
from core.exceptions import InvalidInputError
from harness.evaluators import evaluator_from_config
from harness.logo import leave_one_group_out
from harness.pilot import EQUAL, GAMMA, PilotConfig, run_pilot_workflow
from harness.serializers import LogoResultSerializer, PilotReportSerializer


def _baselines(names, population):
    baselines = []
    for item in names:
        if item == GAMMA:
            baselines.append((GAMMA, population.as_allocation()))
        elif item == EQUAL:
            baselines.append((EQUAL, Allocation.uniform(2)))
        else:
            alpha = Allocation(item)
            baselines.append((f"alpha_a={alpha[0]:g}", alpha))
    return tuple(baselines)


def _evaluator(data, n_groups):
    evaluator = evaluator_from_config(data["evaluator"])
    if evaluator.n_groups != n_groups:
        raise InvalidInputError(
            f"Evaluator has {evaluator.n_groups} groups, config has "
            f"{n_groups}."
        )
    return evaluator


def pilot_config(data, seed=0):
    """(PilotConfig, evaluator) from validated PilotConfigSerializer data."""
    population = PopulationSpec(data["gamma"])
    config = PilotConfig(
        pilot_counts=GroupCounts(tuple(data["pilot_counts"])),
        population=population,
        n_new_multipliers=tuple(data["multipliers"]),
        baselines=_baselines(data["baselines"], population),
        trials=data["trials"],
        m_min=data["m_min"],
        seed=data.get("seed", seed),
        ratios=tuple(data["ratios"]),
        fractions=tuple(data["fractions"]),
        replicates=data["replicates"],
        starts=data["starts"],
    )
    return config, _evaluator(data, 2)


def run_pilot(data, seed=0):
    """(PilotReport, pilot_report.json payload)."""
    config, evaluator = pilot_config(data, seed)
    report = run_pilot_workflow(config, evaluator)
    return report, PilotReportSerializer(report).data


def run_logo(data, seed=0):
    """(LogoResult, labels of its rows, logo.json payload)."""
    labels = list(data["labels"])
    groups = [labels.index(label) for label in data.get("groups", labels)]
    evaluator = _evaluator(data, len(labels))

    result = leave_one_group_out(
        evaluator,
        GroupCounts(tuple(data["counts"])),
        groups=groups,
        trials=data["trials"],
        seed=data.get("seed", seed),
    )
    payload = LogoResultSerializer({
        "labels": [labels[group] for group in result.groups],
        "percent_change": result.percent_change.tolist(),
        "standard_error": result.standard_error.tolist(),
        "baseline_loss": result.baseline_loss.tolist(),
        "trials": result.trials,
    }).data

    return result, labels, payload
