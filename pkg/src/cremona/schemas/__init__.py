"""JSON schemas (draft 2020-12) for map files and command output."""

import json
from functools import lru_cache
from pathlib import Path

NAMES = ("map_file", "analysis_report", "degree_table", "screen")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    path = Path(__file__).with_name(f"{name}.schema.json")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
