"""
Named workflow configurations stored as JSON under harness/data.
"""

import json
from pathlib import Path

from core.exceptions import InvalidInputError

PRESET_DIR = Path(__file__).resolve().parent / "data"

PILOT = "pilot"
LOGO = "logo"


def preset_names(workflow=None):
    names = []
    for path in sorted(PRESET_DIR.glob("*.json")):
        if workflow is None or _read(path)["workflow"] == workflow:
            names.append(path.stem)
    return tuple(names)


def _read(path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def load_preset(name, workflow):
    """The stored config of a preset; it must belong to workflow."""
    path = PRESET_DIR / f"{name}.json"
    if not path.is_file() or name not in preset_names():
        raise InvalidInputError(
            f"Unknown preset {name!r}; choose from "
            f"{', '.join(preset_names(workflow))}."
        )
    preset = _read(path)
    if preset["workflow"] != workflow:
        raise InvalidInputError(
            f"Preset {name!r} is a {preset['workflow']} preset, "
            f"not {workflow}."
        )
    return dict(preset["config"])


def resolve_config(data, workflow):
    """Expand a "preset" key; explicit keys override the preset's."""
    if not isinstance(data, dict):
        raise InvalidInputError("Config must be a JSON object.")
    data = dict(data)
    name = data.pop("preset", None)
    if name is None:
        return data
    config = load_preset(name, workflow)
    config.update(data)
    return config
