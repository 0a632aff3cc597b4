"""Model documents (versioned JSON) and decision-table ingestion."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

import jsonschema

from .approximation import ApproximationSpace
from .contact import ContactError, ProbeAssignment
from .mereology import ParthoodStructure
from .model import GranularSpaceModel, ModelError, SetModel, TableModel
from .universe import Cover, Partition, Universe, UniverseError, reflexive_completion

SCHEMA_VERSION = 1

_names = {"type": "array", "items": {"type": "string"}}
_pairs = {"type": "array", "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}}
_triples = {"type": "array", "items": {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3}}
_map = {"type": "object", "additionalProperties": {"type": "string"}}

MODEL_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["schema_version", "mode"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "mode": {"enum": ["partition", "cover", "abstract"]},
        "universe": {**_names, "minItems": 1},
        "granules": {"type": "array"},
        "named": {"type": "object"},
        "probe": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": ["number", "string"]}}},
        "carrier": {**_names, "minItems": 1},
        "lower": _map,
        "upper": _map,
        "parthood": _pairs,
        "order": _pairs,
        "join": _triples,
        "meet": _triples,
        "bottom": {"type": ["string", "null"]},
        "top": {"type": ["string", "null"]},
        "subsets": {"type": "object", "additionalProperties": _names},
    },
    "allOf": [
        {
            "if": {"properties": {"mode": {"enum": ["partition", "cover"]}}},
            "then": {
                "required": ["universe", "granules"],
                "properties": {"granules": {"type": "array", "items": _names}},
            },
        },
        {
            "if": {"properties": {"mode": {"const": "abstract"}}},
            "then": {
                "required": ["carrier", "granules", "lower", "upper", "parthood", "order"],
                "properties": {"granules": _names},
            },
        },
    ],
    "additionalProperties": False,
}


class ModelDocumentError(ValueError):
    pass


def _load_json(document: str | bytes | Mapping) -> dict:
    if isinstance(document, Mapping):
        return dict(document)
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ModelDocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ModelDocumentError("model document must be a JSON object")
    return data


def _validate(data: dict) -> None:
    validator = jsonschema.Draft202012Validator(MODEL_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise ModelDocumentError(f"field {where}: {first.message}")


def parse_model(document: str | bytes | Mapping) -> GranularSpaceModel:
    """Build a model from a JSON document (text or already-decoded mapping)."""
    data = _load_json(document)
    _validate(data)
    try:
        if data["mode"] == "abstract":
            model = _parse_abstract(data)
        else:
            model = _parse_set(data)
    except (UniverseError, ModelError, ContactError) as exc:
        raise ModelDocumentError(str(exc)) from None
    return model


def _parse_set(data: dict) -> SetModel:
    universe = Universe(tuple(data["universe"]))
    kind = Partition if data["mode"] == "partition" else Cover
    granulation = kind.from_names(universe, data["granules"])
    named = data.get("named", {})
    for k, v in named.items():
        if not isinstance(v, list):
            raise ModelDocumentError(f"field named/{k}: expected a list of universe elements")
    model = SetModel(ApproximationSpace(granulation), named)
    if "probe" in data:
        model.probe = ProbeAssignment(universe, {k: tuple(v) for k, v in data["probe"].items()})
    return model


def _parse_abstract(data: dict) -> TableModel:
    subsets = None
    if "subsets" in data:
        if "universe" not in data:
            raise ModelDocumentError("field subsets: requires a universe")
        universe = Universe(tuple(data["universe"]))
        subsets = {k: universe.mask(v) for k, v in data["subsets"].items()}
    named = data.get("named", {})
    for k, v in named.items():
        if not isinstance(v, str):
            raise ModelDocumentError(f"field named/{k}: expected a carrier element name")
    model = TableModel(
        carrier=data["carrier"],
        granules=data["granules"],
        lower=data["lower"],
        upper=data["upper"],
        parthood=[tuple(p) for p in data["parthood"]],
        order=[tuple(p) for p in data["order"]],
        join={(a, b): c for a, b, c in data.get("join", [])},
        meet={(a, b): c for a, b, c in data.get("meet", [])},
        bottom=data.get("bottom"),
        top=data.get("top"),
        subsets=subsets,
        named=named,
    )
    if subsets is not None:
        model.subset_universe = universe
    return model


def serialize_model(m: GranularSpaceModel) -> dict:
    if isinstance(m, SetModel):
        u = m.universe
        doc: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "mode": m.mode,
            "universe": list(u.elements),
            "granules": [u.names(g) for g in m.granules],
        }
        if m.named:
            doc["named"] = {k: u.names(v) for k, v in m.named.items()}
    elif isinstance(m, TableModel):
        doc = {
            "schema_version": SCHEMA_VERSION,
            "mode": "abstract",
            "carrier": list(m.carrier),
            "granules": [m.name(g) for g in m.granules],
            "lower": m.lower_table(),
            "upper": m.upper_table(),
            "parthood": [list(p) for p in m.parthood_pairs()],
            "order": [list(p) for p in m.order_pairs()],
            "join": [[a, b, c] for (a, b), c in m.join_table().items()],
            "meet": [[a, b, c] for (a, b), c in m.meet_table().items()],
            "bottom": None if m.bottom is None else m.name(m.bottom),
            "top": None if m.top is None else m.name(m.top),
        }
        if m.subsets is not None:
            if m.subset_universe is not None:
                universe = list(m.subset_universe.elements)
            else:
                width = max(m.subsets.values(), default=0).bit_length() or 1
                universe = [str(i + 1) for i in range(width)]
            width = len(universe)
            doc["universe"] = universe
            doc["subsets"] = {
                m.name(k): [universe[i] for i in range(width) if v >> i & 1] for k, v in sorted(m.subsets.items())
            }
        if m.named:
            doc["named"] = {k: m.name(v) for k, v in m.named.items()}
    else:
        raise ModelDocumentError(f"cannot serialize {type(m).__name__}")
    probe = getattr(m, "probe", None)
    if probe is not None:
        doc["probe"] = {k: [str(x) for x in v] for k, v in probe.vectors.items()}
    return doc


def dumps_model(m: GranularSpaceModel) -> str:
    return json.dumps(serialize_model(m), indent=2) + "\n"


def load_model(path: str | Path) -> GranularSpaceModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelDocumentError(f"cannot read {path}: {exc.strerror}") from None
    return parse_model(text)


def fixture_text(name: str) -> str:
    return resources.files("mereo").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def load_fixture(name: str) -> GranularSpaceModel:
    return parse_model(fixture_text(name))


# -- decision tables -----------------------------------------------------------

TABLE_COLUMNS = ("id", "valuation", "decision", "remark", "l", "u")
VALUATION_ALPHABET = frozenset("smwn")


@dataclass(frozen=True)
class DecisionRow:
    id: str
    valuation: tuple[str, ...]
    decision: str
    remark: str
    lower: str
    upper: str


@dataclass(frozen=True)
class DecisionTable:
    rows: tuple[DecisionRow, ...]

    @property
    def labels(self) -> list[str]:
        return [r.decision for r in self.rows]

    def label_of(self, row_id: str) -> str:
        for r in self.rows:
            if r.id == row_id:
                return r.decision
        raise KeyError(row_id)

    def lower_map(self) -> dict[str, str]:
        return {r.decision: self.label_of(r.lower) for r in self.rows}

    def upper_map(self) -> dict[str, str]:
        return {r.decision: self.label_of(r.upper) for r in self.rows}


class DecisionTableError(ValueError):
    pass


def parse_decision_table(text: str) -> DecisionTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DecisionTableError("empty decision table") from None
    header = [h.strip() for h in header]
    if tuple(header) != TABLE_COLUMNS:
        raise DecisionTableError(f"header must be {','.join(TABLE_COLUMNS)}; got {','.join(header)}")
    rows = []
    widths = None
    for lineno, raw in enumerate(reader, start=2):
        if not raw or all(not c.strip() for c in raw):
            continue
        if len(raw) != len(TABLE_COLUMNS):
            raise DecisionTableError(f"row {lineno}: expected {len(TABLE_COLUMNS)} columns, got {len(raw)}")
        rid, valuation, decision, remark, low, up = (c.strip() for c in raw)
        groups = tuple(valuation.split())
        for g in groups:
            bad = set(g) - VALUATION_ALPHABET
            if bad:
                raise DecisionTableError(f"row {rid}: valuation {g!r} uses symbols outside s/m/w/n: {sorted(bad)}")
        shape = tuple(len(g) for g in groups)
        if widths is None:
            widths = shape
        elif shape != widths:
            raise DecisionTableError(f"row {rid}: valuation strings {groups} do not match widths {widths}")
        rows.append(DecisionRow(rid, groups, decision, remark, low, up))
    if not rows:
        raise DecisionTableError("decision table has no rows")
    ids = [r.id for r in rows]
    if len(set(ids)) != len(ids):
        raise DecisionTableError("duplicate row ids")
    labels = [r.decision for r in rows]
    if len(set(labels)) != len(labels):
        raise DecisionTableError("duplicate decision labels")
    for r in rows:
        for col, ref in (("l", r.lower), ("u", r.upper)):
            if ref not in ids:
                raise DecisionTableError(f"row {r.id}: {col} reference {ref!r} is not a row id")
    return DecisionTable(tuple(rows))


def _unique_extremum(candidates: list[int], part) -> int | None:
    """The element of ``candidates`` below (per ``part``) all others, if unique."""
    best = [c for c in candidates if all(part(c, d) for d in candidates)]
    return best[0] if len(best) == 1 else None


def ingest_decision_table(
    text: str,
    parthood_pairs: Iterable[tuple[str, str]] = (),
    granules: Iterable[str] | None = None,
) -> tuple[DecisionTable, ParthoodStructure, TableModel]:
    """Read a decision table into a parthood structure and a table-backed model.

    Parthood is the reflexive completion of ``parthood_pairs`` over the decision
    labels and doubles as the order. Joins and meets are least upper / greatest
    lower bounds where those exist uniquely; bottom and top likewise. Granules
    default to the distinct lower approximations listed in the table.
    """
    table = parse_decision_table(text)
    labels = table.labels
    universe = Universe(tuple(labels))
    try:
        rel = reflexive_completion(parthood_pairs, universe)
    except UniverseError as exc:
        raise DecisionTableError(f"parthood pair: {exc}") from None
    structure = ParthoodStructure.from_relation(rel)
    n = len(labels)

    def part(i: int, j: int) -> bool:
        return structure.part(i, j)

    join, meet = {}, {}
    for i in range(n):
        for j in range(n):
            ub = [k for k in range(n) if part(i, k) and part(j, k)]
            lub = _unique_extremum(ub, part)
            if lub is not None:
                join[(labels[i], labels[j])] = labels[lub]
            lb = [k for k in range(n) if part(k, i) and part(k, j)]
            glb = _unique_extremum(lb, lambda a, b: part(b, a))
            if glb is not None:
                meet[(labels[i], labels[j])] = labels[glb]
    bottom = _unique_extremum(list(range(n)), part)
    top = _unique_extremum(list(range(n)), lambda a, b: part(b, a))
    lower = table.lower_map()
    if granules is None:
        granules = sorted(set(lower.values()), key=labels.index)
    pairs = rel.named_pairs()
    model = TableModel(
        carrier=labels,
        granules=granules,
        lower=lower,
        upper=table.upper_map(),
        parthood=pairs,
        order=pairs,
        join=join,
        meet=meet,
        bottom=None if bottom is None else labels[bottom],
        top=None if top is None else labels[top],
    )
    return table, structure, model


def decision_table_fixture() -> tuple[DecisionTable, ParthoodStructure, TableModel]:
    pairs = json.loads(fixture_text("doctor_teams_parthood.json"))["pairs"]
    return ingest_decision_table(fixture_text("doctor_teams.csv"), [tuple(p) for p in pairs])
