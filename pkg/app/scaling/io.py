"""
Observation CSV files: header group,n_g,n,loss[,seed_tag], LF line endings.
"""

import pandas as pd

from core.exceptions import InvalidInputError
from core.io import write_atomic
from scaling.fitting import LossObservation

REQUIRED_COLUMNS = ("group", "n_g", "n", "loss")
OPTIONAL_COLUMNS = ("seed_tag",)

_FIRST_DATA_LINE = 2


def _parse(value, kind, column, line):
    try:
        number = float(value)
        if kind is int:
            if number != int(number):
                raise ValueError(value)
            return int(number)
        return number
    except (TypeError, ValueError, OverflowError):
        raise InvalidInputError(
            f"line {line}: column {column!r} has invalid value {value!r}."
        )


def read_observations(path):
    """Parse an observation CSV; errors name the offending line."""
    try:
        frame = pd.read_csv(
            path, dtype=str, keep_default_na=False, encoding="utf-8"
        )
    except pd.errors.EmptyDataError:
        raise InvalidInputError(f"{path} is empty.")
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise InvalidInputError(f"{path} is not a valid CSV file: {exc}")

    columns = [column.strip() for column in frame.columns]
    frame.columns = columns
    for column in REQUIRED_COLUMNS:
        if column not in columns:
            raise InvalidInputError(f"missing column {column!r}")
    unknown = set(columns) - set(REQUIRED_COLUMNS) - set(OPTIONAL_COLUMNS)
    if unknown:
        raise InvalidInputError(
            f"unknown column(s) {', '.join(sorted(unknown))}"
        )
    if frame.empty:
        raise InvalidInputError(f"{path} contains no observations.")

    has_tag = "seed_tag" in columns
    observations = []

    for offset, row in enumerate(frame.itertuples(index=False)):
        line = offset + _FIRST_DATA_LINE
        record = row._asdict()
        tag = record.get("seed_tag", "").strip() if has_tag else ""
        try:
            observations.append(LossObservation(
                group=_parse(record["group"], int, "group", line),
                n_g=_parse(record["n_g"], int, "n_g", line),
                n=_parse(record["n"], int, "n", line),
                loss=_parse(record["loss"], float, "loss", line),
                seed_tag=_parse(tag, int, "seed_tag", line) if tag else None,
            ))
        except InvalidInputError as exc:
            message = str(exc)
            if not message.startswith("line "):
                message = f"line {line}: {message}"
            raise InvalidInputError(message)

    return observations


def observations_frame(observations):
    frame = pd.DataFrame(
        {
            "group": [obs.group for obs in observations],
            "n_g": [obs.n_g for obs in observations],
            "n": [obs.n for obs in observations],
            "loss": [obs.loss for obs in observations],
        },
        columns=list(REQUIRED_COLUMNS),
    )
    if any(obs.seed_tag is not None for obs in observations):
        frame["seed_tag"] = pd.array(
            [obs.seed_tag for obs in observations], dtype="Int64"
        )
    return frame


def write_observations(path, observations):
    """Write observations with 17 significant digits per loss."""
    text = observations_frame(observations).to_csv(
        index=False, float_format="%.17g", lineterminator="\n"
    )
    return write_atomic(path, text)
