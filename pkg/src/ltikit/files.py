"""Model files and report serialization."""
from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .errors import DimensionError, DimensionMismatch, NonFiniteValue, ParseError
from .statespace import StateSpaceModel

SCHEMA_VERSION = "1"
_META_KEYS = ("name", "units", "parameters")


def model_schema() -> dict:
    return json.loads(resources.files("ltikit").joinpath("data/model.schema.json").read_text())


def model_from_dict(doc: dict) -> StateSpaceModel:
    try:
        jsonschema.validate(doc, model_schema())
    except jsonschema.ValidationError as exc:
        raise ParseError(f"model file does not match schema: {exc.message}") from None
    for key in "ABC":
        widths = {len(row) for row in doc[key]}
        if len(widths) != 1:
            raise DimensionError(f"{key} is not rectangular")
    meta = {k: doc[k] for k in _META_KEYS if k in doc}
    try:
        return StateSpaceModel(doc["time_domain"], doc["A"], doc["B"], doc["C"], meta)
    except NonFiniteValue as exc:
        raise ParseError(str(exc)) from None
    except DimensionMismatch as exc:
        raise DimensionError(str(exc)) from None


def parse_model(path) -> StateSpaceModel:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read model file: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None
    return model_from_dict(doc)


def model_to_dict(model: StateSpaceModel) -> dict:
    doc = {"time_domain": model.domain.value}
    for k in _META_KEYS:
        if k in model.metadata:
            doc[k] = model.metadata[k]
    doc.update(A=model.A.tolist(), B=model.B.tolist(), C=model.C.tolist())
    return doc


def dumps_model(model: StateSpaceModel) -> str:
    return dumps(model_to_dict(model))


def dumps(doc) -> str:
    """Stable JSON text: two-space indent, trailing newline.

    Floats use Python's shortest round-trip repr.
    """
    return json.dumps(jsonable(doc), indent=2, allow_nan=False) + "\n"


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.generic):
        return obj.item()
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()
