"""
Atomic writers for the JSON, CSV and SVG artifacts.
"""

import json
import os
import tempfile
from pathlib import Path

from django.conf import settings


def with_schema_version(payload):
    """Prefix payload with the output schema version."""
    return {"schema_version": settings.ALLOCPLAN_SCHEMA_VERSION, **payload}


def dumps(payload):
    """Stable JSON text; floats use Python's shortest round-trip repr."""
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def write_atomic(path, text):
    """Write text to path through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(
        prefix=f".{path.name}.", dir=path.parent
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise

    return path


def write_json(path, payload):
    return write_atomic(path, dumps(with_schema_version(payload)))


def read_json(path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
