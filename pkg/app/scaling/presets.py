"""
Published per-dataset scaling fits, loadable as ScalingModel instances.

The table reports sigma and tau; the forecast uses their squares.
"""

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from core.domain import PopulationSpec
from core.exceptions import InvalidInputError
from allocation.forecast import GroupScaling, ScalingModel

TABLE_PATH = Path(__file__).resolve().parent / "data" / "published_fits.json"


@dataclass(frozen=True, eq=False)
class DatasetPreset:
    name: str
    labels: tuple
    population: PopulationSpec
    n: int
    model: ScalingModel


@lru_cache(maxsize=None)
def _table():
    with open(TABLE_PATH, encoding="utf-8") as handle:
        return json.load(handle)


def dataset_names():
    return tuple(sorted(_table()))


def load_dataset_preset(name):
    """Return the published fit for a dataset."""
    try:
        entry = _table()[name]
    except KeyError:
        raise InvalidInputError(
            f"Unknown dataset preset {name!r}; choose from "
            f"{', '.join(dataset_names())}."
        )

    model = ScalingModel(tuple(
        GroupScaling(
            sigma2=row["sigma"] ** 2,
            p=row["p"],
            tau2=row["tau"] ** 2,
            q=row["q"],
            delta=row["delta"],
            m_min=entry["m_min"],
        )
        for row in entry["fits"]
    ))

    return DatasetPreset(
        name=name,
        labels=tuple(entry["groups"]),
        population=PopulationSpec(entry["gamma"]),
        n=int(entry["n"]),
        model=model,
    )
