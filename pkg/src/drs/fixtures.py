"""Bundled reference fixtures (spaces and the printed groupoid table)."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .magma import FiniteGroupoid
from .relcore import FiniteRelationSpace

SPACE_FILES = {"EX1": "ex1.json", "EX1-raw": "ex1_raw.json", "TOY2": "toy2.json",
               "CH3": "ch3.json", "FORK": "fork.json", "ID2": "id2.json", "ID3": "id3.json"}
GROUPOID_FILES = {"TABLE1": "table1.json"}


def fixture_text(filename: str) -> str:
    return resources.files("drs").joinpath("data", filename).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def space(name: str) -> FiniteRelationSpace:
    from .documents import parse_space
    try:
        filename = SPACE_FILES[name]
    except KeyError:
        raise KeyError(f"no bundled space named {name!r}; choose from {sorted(SPACE_FILES)}") from None
    return parse_space(fixture_text(filename))


@lru_cache(maxsize=None)
def groupoid(name: str = "TABLE1") -> FiniteGroupoid:
    from .documents import parse_groupoid
    return parse_groupoid(fixture_text(GROUPOID_FILES[name]))


def all_spaces() -> list[FiniteRelationSpace]:
    return [space(name) for name in SPACE_FILES]


def raw_document(name: str) -> dict:
    files = {**SPACE_FILES, **GROUPOID_FILES}
    return json.loads(fixture_text(files[name]))
