"""JSON conversion for the result dataclasses (both directions)."""
from __future__ import annotations

import dataclasses
import json
import typing
from fractions import Fraction

import numpy as np

from .angles import AngleVector
from .spectral import Signature

__all__ = ["dumps", "from_dict", "to_jsonable", "angles_from_dict", "angles_to_dict"]


def to_jsonable(obj):
    """Recursively turn dataclasses, numpy values and tuples into JSON types."""
    if isinstance(obj, AngleVector):
        return angles_to_dict(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if f.name != "fan"}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, shortest float repr)."""
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def angles_to_dict(a: AngleVector) -> dict:
    return {
        "mode": a.mode,
        "radians": list(a.angles),
        "pi_fractions": None if a.exact is None else [str(f) for f in a.exact],
    }


def angles_from_dict(d: dict) -> AngleVector:
    if d.get("pi_fractions") is not None:
        return AngleVector.from_pi_fractions([Fraction(f) for f in d["pi_fractions"]], d["mode"])
    return AngleVector(tuple(d["radians"]), d["mode"])


def from_dict(cls, data: dict):
    """Rebuild a flat result dataclass from :func:`to_jsonable` output."""
    hints = typing.get_type_hints(cls)
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name not in data:
            continue
        value = data[f.name]
        hint = hints[f.name]
        if hint is np.ndarray or "ndarray" in str(hint):
            value = None if value is None else np.array(value, dtype=float)
        elif hint is Signature:
            value = Signature(**value)
        elif hint is AngleVector:
            value = angles_from_dict(value)
        elif "tuple" in str(hint) and isinstance(value, list):
            value = tuple(value)
        kwargs[f.name] = value
    return cls(**kwargs)
