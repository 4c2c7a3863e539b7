"""JSON instance files (format version 1).

Scalars are JSON numbers (float mode) or ``"p/q"`` strings (rational mode);
rational values are written back as strings so round trips are lossless.
The schema lives in ``schema/instance-v1.schema.json``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from . import arith
from .core import Channel, Game, InfoStructure, PairMeasure, ProbVector, make_cond_independent, shared_signal
from .errors import ValidationError

FORMAT_VERSION = "1"


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("infoorder").joinpath("schema/instance-v1.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _label(v):
    return tuple(_label(x) for x in v) if isinstance(v, list) else v


def _labels(vs) -> tuple:
    return tuple(_label(v) for v in vs)


def _dump_label(v):
    return [_dump_label(x) for x in v] if isinstance(v, tuple) else v


def _dump_labels(vs) -> list:
    return [_dump_label(v) for v in vs]


def validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"instance file does not match the schema: {exc.message}") from exc


def from_dict(doc: dict, exact: bool | None = None):
    """Build the library object described by an instance document."""
    validate(doc)
    if exact is None:
        exact = doc.get("arithmetic", "rational") == "rational"
    kind = doc["kind"]
    if kind == "game":
        return Game(_labels(doc["x_labels"]), _labels(doc["u1_labels"]), _labels(doc["u2_labels"]),
                    arith.asarray(doc["cost"], exact))
    if kind == "pair":
        return PairMeasure(_labels(doc["x_labels"]), _labels(doc["y_labels"]), arith.asarray(doc["table"], exact))
    if kind == "channel":
        return Channel(_labels(doc["input_labels"]), _labels(doc["output_labels"]), arith.asarray(doc["matrix"], exact))
    xs = _labels(doc["x_labels"])
    if "joint" in doc:
        return InfoStructure(xs, _labels(doc["y1_labels"]), _labels(doc["y2_labels"]),
                             arith.asarray(doc["joint"], exact), bool(doc.get("cond_independent", False)))
    zeta = ProbVector(xs, arith.asarray(doc["prior"], exact))

    def channel(spec):
        return Channel(xs, _labels(spec["labels"]), arith.asarray(spec["matrix"], exact))

    if "shared" in doc:
        return shared_signal(zeta, channel(doc["shared"]))
    return make_cond_independent(zeta, channel(doc["channel1"]), channel(doc["channel2"]))


def to_dict(obj) -> dict:
    """Serialize a structure, game, pair or channel to an instance document."""
    if isinstance(obj, InfoStructure):
        exact, body = obj.exact, {
            "kind": "structure",
            "x_labels": _dump_labels(obj.x_labels),
            "y1_labels": _dump_labels(obj.y1_labels),
            "y2_labels": _dump_labels(obj.y2_labels),
            "joint": arith.dump_array(obj.joint),
            "cond_independent": obj.cond_independent,
        }
    elif isinstance(obj, Game):
        exact, body = obj.exact, {
            "kind": "game",
            "x_labels": _dump_labels(obj.x_labels),
            "u1_labels": _dump_labels(obj.u1_labels),
            "u2_labels": _dump_labels(obj.u2_labels),
            "cost": arith.dump_array(obj.cost),
        }
    elif isinstance(obj, PairMeasure):
        exact, body = obj.exact, {
            "kind": "pair",
            "x_labels": _dump_labels(obj.x_labels),
            "y_labels": _dump_labels(obj.y_labels),
            "table": arith.dump_array(obj.table),
        }
    elif isinstance(obj, Channel):
        exact, body = obj.exact, {
            "kind": "channel",
            "input_labels": _dump_labels(obj.input_labels),
            "output_labels": _dump_labels(obj.output_labels),
            "matrix": arith.dump_array(obj.matrix),
        }
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"format_version": FORMAT_VERSION, "arithmetic": "rational" if exact else "float", **body}


def load(path, exact: bool | None = None):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: top level must be an object")
    return from_dict(doc, exact)


def save(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(to_dict(obj), indent=2) + "\n", encoding="utf-8")
    return path

