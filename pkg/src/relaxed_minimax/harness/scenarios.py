"""Scenario files: JSON schema, validation and loading."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import jsonschema

from .generators import KINDS

__all__ = [
    "Scenario",
    "SuiteError",
    "SCENARIO_SCHEMA",
    "DEFAULT_TOLERANCES",
    "load_suite",
    "load_scenario",
    "validate_scenario",
    "dump_json",
]

DEFAULT_TOLERANCES = {"exact": 1e-9, "grid": 1e-6, "envelope": 1e-6}


class SuiteError(Exception):
    """A suite or scenario file could not be read or did not validate."""


_EXTREAL = {"oneOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}]}
_TAIL = {
    "oneOf": [
        {"enum": ["inf", "-inf"]},
        {
            "type": "object",
            "properties": {"slope": {"type": "number"}, "value": _EXTREAL},
            "required": ["slope"],
            "additionalProperties": False,
        },
    ]
}
_SEGMENT = {
    "oneOf": [
        {"enum": ["inf", "-inf", "affine"]},
        {
            "type": "object",
            "properties": {"left": {"type": "number"}, "right": {"type": "number"}},
            "required": ["left", "right"],
            "additionalProperties": False,
        },
    ]
}
_PWL = {
    "type": "object",
    "properties": {
        "breakpoints": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "values": {"type": "array", "items": _EXTREAL, "minItems": 1},
        "segments": {"type": "array", "items": _SEGMENT},
        "left_tail": _TAIL,
        "right_tail": _TAIL,
    },
    "required": ["breakpoints", "values"],
    "additionalProperties": False,
}
_GRID = {
    "type": "object",
    "properties": {
        "axes": {
            "type": "array",
            "minItems": 1,
            "maxItems": 2,
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        },
        "values": {"type": "array", "items": _EXTREAL},
    },
    "required": ["axes", "values"],
    "additionalProperties": False,
}
_RESTRICTION = {
    "oneOf": [
        {"type": "null"},
        {
            "type": "object",
            "properties": {
                "lo": _EXTREAL,
                "hi": _EXTREAL,
                "lo_closed": {"type": "boolean"},
                "hi_closed": {"type": "boolean"},
            },
            "required": ["lo", "hi"],
            "additionalProperties": False,
        },
    ]
}
_EXPECTED = {
    "type": "object",
    "properties": {"lhs": _EXTREAL, "rhs": _EXTREAL, "status": {"enum": ["pass", "fail", "vacuous"]}},
    "additionalProperties": False,
}
_FAMILY = {
    "type": "object",
    "properties": {
        "generators": {"type": "array", "items": _PWL, "minItems": 1},
        "y_restriction": _RESTRICTION,
        "density": {"type": "integer", "minimum": 1},
        "expected": _EXPECTED,
    },
    "required": ["generators"],
    "additionalProperties": False,
}

PAYLOAD_SCHEMAS = {
    "conjugacy": {
        "type": "object",
        "properties": {
            "function": _PWL,
            "family": {"type": "array", "items": _PWL, "minItems": 1},
            "checks": {
                "type": "array",
                "items": {"enum": ["biconjugate", "hull_conjugate", "hull_infimum", "oracle", "inf_rule", "sup_rule"]},
                "minItems": 1,
            },
            "expected": {"type": "object"},
        },
        "required": ["checks"],
        "oneOf": [{"required": ["function"]}, {"required": ["family"]}],
        "additionalProperties": False,
    },
    "subdiff": {
        "type": "object",
        "properties": {
            "generators": {"type": "array", "items": _PWL, "minItems": 1},
            "x": {"type": "number"},
            "eps": {"type": "number"},
            "oracle": {"type": "boolean"},
            "expected": {
                "type": "object",
                "properties": {"lhs": {"type": "array", "items": _EXTREAL}},
                "additionalProperties": False,
            },
        },
        "required": ["generators", "x", "eps"],
        "additionalProperties": False,
    },
    "mm1": _FAMILY,
    "mmb": _FAMILY,
    "localized": _FAMILY,
    "interior_equality": _FAMILY,
    "marginal": _FAMILY,
    "simplex_duality": {
        "type": "object",
        "properties": {
            "generators": {"type": "array", "items": _PWL, "minItems": 1, "maxItems": 6},
            "mode": {"enum": ["auto", "lp", "grid"]},
            "expected": _EXPECTED,
        },
        "required": ["generators"],
        "additionalProperties": False,
    },
    "monotone": {
        "type": "object",
        "properties": {
            "terms": {"type": "array", "items": _GRID, "minItems": 1},
            "expected": _EXPECTED,
        },
        "required": ["terms"],
        "additionalProperties": False,
    },
    "envelope": {
        "type": "object",
        "properties": {
            "function": _PWL,
            "x0": {"type": "number"},
            "radii": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
            "expected": {"type": "object", "properties": {"values": {"type": "array", "items": _EXTREAL}}},
        },
        "required": ["function", "x0"],
        "additionalProperties": False,
    },
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "kind": {"enum": list(KINDS)},
        "payload": {"type": "object"},
        "tolerances": {
            "type": "object",
            "properties": {k: {"type": "number", "exclusiveMinimum": 0} for k in DEFAULT_TOLERANCES},
            "additionalProperties": False,
        },
        "seed": {"type": "integer"},
        "params": {"type": "object"},
        "metadata": {"type": "object"},
        "inject_fault": {"type": "boolean"},
    },
    "required": ["id", "kind", "payload"],
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
_PAYLOAD_VALIDATORS = {k: jsonschema.Draft202012Validator(s) for k, s in PAYLOAD_SCHEMAS.items()}


@dataclass(frozen=True)
class Scenario:
    id: str
    kind: str
    payload: dict
    tolerances: dict = field(default_factory=dict)
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    inject_fault: bool = False

    def tolerance(self, name: str, default: Optional[dict] = None) -> float:
        base = dict(DEFAULT_TOLERANCES)
        base.update(default or {})
        base.update(self.tolerances)
        return float(base[name])

    def to_dict(self) -> dict:
        d = {"id": self.id, "kind": self.kind, "payload": self.payload}
        if self.tolerances:
            d["tolerances"] = self.tolerances
        if self.seed is not None:
            d["seed"] = self.seed
        if self.params:
            d["params"] = self.params
        if self.metadata:
            d["metadata"] = self.metadata
        if self.inject_fault:
            d["inject_fault"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        return cls(
            id=d["id"],
            kind=d["kind"],
            payload=d["payload"],
            tolerances=dict(d.get("tolerances", {})),
            seed=d.get("seed"),
            params=dict(d.get("params", {})),
            metadata=dict(d.get("metadata", {})),
            inject_fault=bool(d.get("inject_fault", False)),
        )


def _pointer(prefix: str, path) -> str:
    parts = [prefix] + [str(p).replace("~", "~0").replace("/", "~1") for p in path]
    return "/".join(parts) if prefix else "/" + "/".join(parts[1:])


def validate_scenario(d, where: str = "") -> Scenario:
    """Validate one scenario dict; errors carry JSON-pointer paths rooted at ``where``."""
    if not isinstance(d, dict):
        raise SuiteError(f"{where or '/'}: scenario must be an object")
    kind = d.get("kind")
    if isinstance(kind, str) and kind not in KINDS:
        raise SuiteError(f"{where}/kind: unknown scenario kind {kind!r}")
    errors = sorted(_VALIDATOR.iter_errors(d), key=lambda e: list(e.absolute_path))
    if not errors:
        errors = sorted(_PAYLOAD_VALIDATORS[kind].iter_errors(d["payload"]), key=lambda e: list(e.absolute_path))
        errors = [(["payload"] + list(e.absolute_path), e.message) for e in errors]
    else:
        errors = [(list(e.absolute_path), e.message) for e in errors]
    if errors:
        lines = [f"{_pointer(where, path) or '/'}: {msg}" for path, msg in errors]
        raise SuiteError("schema violation\n  " + "\n  ".join(lines))
    return Scenario.from_dict(d)


def _read_json(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SuiteError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SuiteError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def parse_suite(data) -> list:
    """Validate an in-memory suite: a list of scenarios or ``{"scenarios": [...]}``."""
    if isinstance(data, dict) and "scenarios" in data:
        items, prefix = data["scenarios"], "/scenarios"
    elif isinstance(data, list):
        items, prefix = data, ""
    else:
        raise SuiteError("a suite is a list of scenarios or an object with a 'scenarios' list")
    if not isinstance(items, list):
        raise SuiteError(f"{prefix}: expected a list of scenarios")
    out = []
    seen = {}
    for i, d in enumerate(items):
        sc = validate_scenario(d, f"{prefix}/{i}")
        if sc.id in seen:
            raise SuiteError(f"{prefix}/{i}/id: duplicate scenario id {sc.id!r} (first at {prefix}/{seen[sc.id]})")
        seen[sc.id] = i
        out.append(sc)
    return out


def load_suite(path) -> list:
    return parse_suite(_read_json(path))


def load_scenario(path) -> Scenario:
    data = _read_json(path)
    if isinstance(data, dict) and "scenarios" in data:
        items = parse_suite(data)
        if len(items) != 1:
            raise SuiteError(f"{path}: expected exactly one scenario, found {len(items)}")
        return items[0]
    return validate_scenario(data)


def dump_json(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"
