"""Structured JSON configuration for the command-line driver.

A config file is a single JSON object validated against a strict schema
(unknown keys are rejected).  Every section has defaults, so the empty
object {} is a valid configuration.
"""

from __future__ import annotations

import copy
import json

import jsonschema
import numpy as np

from .symbols import DampingDescriptor, SymbolError, build_example

__all__ = ["ConfigError", "DEFAULTS", "SCHEMA", "load_config", "merge_config",
           "apply_override", "descriptor_from_config", "a0_from_config"]


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "damping": {"variant": "two_strip", "delta": 0.12, "epsilon": 0.1, "c": 0.1},
    "grid": {"n": 256},
    "evolution": {"dt": 1e-3, "t_max": 20.0, "record_every": 20, "seed": 0,
                  "band": 4},
    "spectrum": {"n_max": 12, "zero_tol": None},
    "averages": {"t_max": 16.0, "n_x": 64, "n_theta": 256, "quad_step": 1e-3,
                 "c_floor": 0.05},
    "beams": {"x0": [0.5, 0.25], "theta0": 0.0,
              "A0": {"re": [[0.0, 0.0], [0.0, 0.0]],
                     "im": [[1.0, 0.0], [0.0, 1.0]]},
              "k_list": [32, 64, 128, 256], "T": 2.0},
    "output": {"directory": "out"},
}

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_MATRIX = {
    "type": "array", "minItems": 2, "maxItems": 2,
    "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _NUM},
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "damping": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "variant": {"enum": ["constant", "multiplicative", "two_strip",
                                     "three_strip", "custom"]},
                "delta": _POS,
                "epsilon": _POS,
                "c": {"type": "number", "minimum": 0},
                "factors": {"type": "array", "items": {"type": "object"}},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"n": {"type": "integer", "minimum": 16}},
        },
        "evolution": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dt": _POS,
                "t_max": _POS,
                "record_every": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
                "band": {"type": "integer", "minimum": 1},
            },
        },
        "spectrum": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_max": {"type": "integer", "minimum": 1},
                "zero_tol": {"type": ["number", "null"], "exclusiveMinimum": 0},
            },
        },
        "averages": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_max": _POS,
                "n_x": {"type": "integer", "minimum": 8},
                "n_theta": {"type": "integer", "minimum": 8},
                "quad_step": _POS,
                "c_floor": _POS,
            },
        },
        "beams": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "x0": {"type": "array", "minItems": 2, "maxItems": 2,
                       "items": _NUM},
                "theta0": _NUM,
                "A0": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"re": _MATRIX, "im": _MATRIX},
                },
                "k_list": {"type": "array", "minItems": 1,
                           "items": {"type": "number", "minimum": 1}},
                "T": _POS,
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"directory": {"type": "string", "minLength": 1}},
        },
    },
}


def merge_config(user: dict) -> dict:
    """Validate a user config and fill in defaults section by section."""
    try:
        jsonschema.validate(user, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from exc
    merged = copy.deepcopy(DEFAULTS)
    for section, values in user.items():
        merged[section].update(values)
    return merged


def load_config(path: str | None) -> dict:
    """Read, validate, and default-fill a config file; None means defaults."""
    if path is None:
        return merge_config({})
    try:
        with open(path) as fh:
            user = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(user, dict):
        raise ConfigError("config root must be a JSON object")
    return merge_config(user)


def apply_override(user: dict, assignment: str) -> dict:
    """Apply one --set key=value override (dotted path, JSON-parsed value)."""
    if "=" not in assignment:
        raise ConfigError(f"--set expects key=value, got {assignment!r}")
    path, raw = assignment.split("=", 1)
    keys = path.strip().split(".")
    if not all(keys):
        raise ConfigError(f"bad override path {path!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = user
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path {path!r} crosses a non-object")
    node[keys[-1]] = value
    return user


def descriptor_from_config(cfg: dict) -> DampingDescriptor:
    damping = cfg["damping"]
    try:
        if damping["variant"] == "custom":
            factors = damping.get("factors")
            if not factors:
                raise ConfigError("custom damping needs a factors list")
            return DampingDescriptor.from_dict(
                {"factors": factors, "variant": "custom", "params": {}})
        return build_example(damping["variant"], delta=damping["delta"],
                             epsilon=damping["epsilon"], c=damping["c"])
    except SymbolError as exc:
        raise ConfigError(str(exc)) from exc


def a0_from_config(cfg: dict) -> np.ndarray:
    a0 = cfg["beams"]["A0"]
    return np.asarray(a0["re"], float) + 1j * np.asarray(a0["im"], float)
