"""Document formats: space JSON and edge lists, groupoid tables, information
tables, report JSON (with schema) and DOT export."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import jsonschema

from .magma import FiniteGroupoid
from .relcore import FiniteRelationSpace, SpaceError


class DocumentError(ValueError):
    """Malformed input document; ``line`` is set for line-oriented formats."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


SPACE_SCHEMA = {
    "type": "object",
    "required": ["universe", "relation"],
    "properties": {
        "name": {"type": "string"},
        "source": {"type": "string"},
        "universe": {"type": "array", "items": {"type": ["string", "integer"]}},
        "relation": {"type": "array",
                     "items": {"type": "array", "minItems": 2, "maxItems": 2,
                               "items": {"type": ["string", "integer"]}}},
    },
}

GROUPOID_SCHEMA = {
    "type": "object",
    "required": ["universe", "table"],
    "properties": {
        "name": {"type": "string"},
        "universe": {"type": "array", "items": {"type": ["string", "integer"]}},
        "table": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
    },
}

INFO_TABLE_SCHEMA = {
    "type": "object",
    "required": ["objects", "attributes", "values"],
    "properties": {
        "objects": {"type": "array", "items": {"type": ["string", "integer"]}},
        "attributes": {"type": "array", "items": {"type": "string"}},
        "values": {"type": "object"},
    },
}

CLAIM_REPORT_SCHEMA = {
    "type": "object",
    "required": ["claim", "verdict", "witness", "sweepSize", "seed"],
    "properties": {
        "claim": {"type": "string"},
        "verdict": {"enum": ["holds_exhaustively", "holds_sampled", "fails", "not_applicable"]},
        "witness": {},
        "sweepSize": {"type": "integer", "minimum": 0},
        "seed": {"type": ["integer", "null"]},
        "space": {"type": ["string", "null"]},
        "hypothesis": {"type": "array", "items": {"type": "string"}},
        "note": {"type": "string"},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "ok", "result"],
    "properties": {
        "command": {"type": "string"},
        "ok": {"type": "boolean"},
        "result": {},
        "reports": {"type": "array", "items": CLAIM_REPORT_SCHEMA},
    },
}


def validate_report(doc: Mapping) -> None:
    jsonschema.validate(doc, REPORT_SCHEMA)


def _read(source: str | Path) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if "\n" not in source and not source.lstrip().startswith("{"):
        p = Path(source)
        if p.exists():
            return p.read_text(encoding="utf-8")
    return source


def _load_json(text: str, schema: dict, what: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed {what} JSON: {exc.msg}", exc.lineno) from None
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise DocumentError(f"invalid {what} document at {path}: {exc.message}") from None
    return doc


# -- spaces -------------------------------------------------------------------

def space_from_document(doc: Mapping) -> FiniteRelationSpace:
    universe = [str(x) for x in doc["universe"]]
    seen = set()
    pairs = []
    for k, (a, b) in enumerate(doc["relation"]):
        pair = (str(a), str(b))
        if pair in seen:
            raise DocumentError(f"duplicate pair {pair} at relation[{k}]")
        seen.add(pair)
        pairs.append(pair)
    try:
        return FiniteRelationSpace(tuple(universe), frozenset(pairs), doc.get("name"))
    except SpaceError as exc:
        raise DocumentError(str(exc)) from None


def _parse_edges(text: str, name: str | None) -> FiniteRelationSpace:
    universe: list[str] = []
    known: set[str] = set()
    pairs: dict[tuple[str, str], int] = {}

    def declare(x):
        if x not in known:
            known.add(x)
            universe.append(x)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 1:
            declare(tokens[0])
            continue
        if len(tokens) != 2:
            raise DocumentError(f"expected 'x y', got {raw.strip()!r}", lineno)
        a, b = tokens
        if (a, b) in pairs:
            raise DocumentError(f"duplicate pair ({a}, {b}); first seen on line {pairs[a, b]}", lineno)
        pairs[a, b] = lineno
        declare(a)
        declare(b)
    return FiniteRelationSpace(tuple(universe), frozenset(pairs), name)


def parse_space(source: str | Path, name: str | None = None) -> FiniteRelationSpace:
    """Parse a space from JSON or an edge list (``x y`` per line, ``#``
    comments, a lone label declares an isolated element)."""
    text = _read(source)
    if text.lstrip().startswith("{"):
        space = space_from_document(_load_json(text, SPACE_SCHEMA, "space"))
        if name and not space.name:
            space = FiniteRelationSpace(space.universe, space.relation, name)
        return space
    return _parse_edges(text, name)


def space_document(space: FiniteRelationSpace) -> dict:
    doc: dict = {}
    if space.name:
        doc["name"] = space.name
    doc["universe"] = list(space.universe)
    doc["relation"] = [list(p) for p in space.sorted_pairs()]
    return doc


def emit_space(space: FiniteRelationSpace, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(space_document(space), indent=2, ensure_ascii=False) + "\n"
    if fmt == "edges":
        # declaring every label first pins the universe order on re-parse
        lines = [f"# {space.name}"] if space.name else []
        lines += list(space.universe)
        lines += [f"{a} {b}" for a, b in space.sorted_pairs()]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown space format {fmt!r}")


# -- groupoids ----------------------------------------------------------------

def parse_groupoid(source: str | Path) -> FiniteGroupoid:
    doc = _load_json(_read(source), GROUPOID_SCHEMA, "groupoid")
    try:
        return FiniteGroupoid(tuple(str(x) for x in doc["universe"]), doc["table"], doc.get("name"))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def groupoid_document(G: FiniteGroupoid) -> dict:
    doc: dict = {"name": G.name} if G.name else {}
    doc["universe"] = list(G.universe)
    doc["table"] = [list(row) for row in G.table]
    return doc


def emit_groupoid(G: FiniteGroupoid) -> str:
    return json.dumps(groupoid_document(G), indent=2) + "\n"


# -- information tables ---------------------------------------------------------

@dataclass(frozen=True)
class InfoTable:
    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    values: Mapping[str, Mapping[str, frozenset]]

    def value(self, attribute: str, obj: str) -> frozenset:
        return self.values[attribute][obj]

    @property
    def deterministic(self) -> bool:
        return all(len(v) == 1 for row in self.values.values() for v in row.values())


def parse_info_table(source: str | Path) -> InfoTable:
    doc = _load_json(_read(source), INFO_TABLE_SCHEMA, "information table")
    objects = tuple(str(o) for o in doc["objects"])
    attributes = tuple(doc["attributes"])
    values = {}
    for attr in attributes:
        row = doc["values"].get(attr)
        if not isinstance(row, dict):
            raise DocumentError(f"no values for attribute {attr!r}")
        cells = {}
        for obj in objects:
            if obj not in row:
                raise DocumentError(f"value of {attr!r} missing for object {obj!r}")
            v = row[obj]
            cells[obj] = frozenset(map(json.dumps, v if isinstance(v, list) else [v]))
        values[attr] = cells
    return InfoTable(objects, attributes, values)


def table_to_space(table: InfoTable, B: Iterable[str], name: str | None = None) -> FiniteRelationSpace:
    """Indiscernibility: ``x ~ w`` iff every attribute of ``B`` gives equal value sets."""
    B = list(B)
    if not B:
        raise DocumentError("attribute subset B must be nonempty")
    unknown = [b for b in B if b not in table.attributes]
    if unknown:
        raise DocumentError(f"unknown attributes {unknown}")
    pairs = {(x, w) for x in table.objects for w in table.objects
             if all(table.value(b, x) == table.value(b, w) for b in B)}
    return FiniteRelationSpace(table.objects, frozenset(pairs), name)


# -- DOT ------------------------------------------------------------------------

_BARE = re.compile(r"^[A-Za-z0-9_]+$")


def _dot_id(label: str) -> str:
    return label if _BARE.match(label) else json.dumps(label, ensure_ascii=False)


def digraph_dot(name: str, nodes: Sequence[str], edges: Iterable[tuple[str, str]],
                rankdir: str | None = None) -> str:
    lines = [f"digraph {_dot_id(name)} {{"]
    if rankdir:
        lines.append(f"  rankdir={rankdir};")
    lines += [f"  {_dot_id(x)};" for x in nodes]
    lines += [f"  {_dot_id(a)} -> {_dot_id(b)};" for a, b in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def space_dot(space: FiniteRelationSpace) -> str:
    return digraph_dot(space.name or "R", space.universe, space.sorted_pairs())


def order_dot(G: FiniteGroupoid) -> str:
    """Hasse diagram of ``a <= b iff ab = ba = b`` (covering edges, bottom to top)."""
    from .latfca import covers
    n, T = G.n, G.table
    leq = [[T[a][b] == b and T[b][a] == b for b in range(n)] for a in range(n)]
    edges = [(G.universe[a], G.universe[b]) for a, b in covers(leq)]
    return digraph_dot(G.name or "order", G.universe, edges, rankdir="BT")


def set_label(labels: Sequence[str]) -> str:
    return "{" + ",".join(labels) + "}"
