"""JSON Schemas for every ``--json`` document and for the tree input formats."""

from __future__ import annotations

import json
from functools import cache
from importlib.resources import files
from typing import Any

# Command names, plus the two tree documents read by ``verify`` and ``rank``.
SCHEMAS = (
    "normalize",
    "displacement",
    "pump",
    "witness",
    "reduce",
    "simulate",
    "oracle",
    "decide",
    "verify",
    "rank",
    "flow-tree",
    "certificate",
)


def schema_text(name: str) -> str:
    if name not in SCHEMAS:
        raise KeyError(f"unknown schema {name!r}; known: {', '.join(SCHEMAS)}")
    return files(__name__).joinpath(f"{name}.schema.json").read_text(encoding="utf-8")


@cache
def load_schema(name: str) -> dict[str, Any]:
    return json.loads(schema_text(name))
