"""Run configuration documents.

A configuration is a flat JSON object. Recognized keys are the scenario
selector ("scenario"), the sweep controls ("grid", "parallelism"), and any
field of SystemParams or ScenarioConfig by name (complex amplitudes as a
number or an [re, im] pair, init_cov as "thermal", "vacuum", or a 6x6 nested
list). Unknown keys are rejected. Serialization is canonical (sorted keys,
exact shortest-round-trip floats) so resolved configs re-serialize
byte-identically.
"""

import json
from dataclasses import fields

from .dynamics import ConfigInvalid, ScenarioConfig
from .experiments import SweepSpec, apply_overrides, preset_config
from .model import SystemParams


class ParseError(ValueError):
    """The document is not a well-formed flat JSON object."""


class UnknownKey(ValueError):
    def __init__(self, key):
        super().__init__(f"unknown configuration key {key!r}")
        self.key = key


class RangeError(ValueError):
    def __init__(self, key, reason):
        super().__init__(f"{key}: {reason}")
        self.key = key


_PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
_SCENARIO_KEYS = tuple(f.name for f in fields(ScenarioConfig)
                       if f.name != "params")
_COMPLEX_KEYS = ("init_alpha1", "init_alpha2", "init_beta")
_TOP_KEYS = ("scenario", "grid", "parallelism")


def _coerce(key, value):
    if key in _COMPLEX_KEYS:
        if isinstance(value, (int, float)):
            return complex(value)
        if (isinstance(value, list) and len(value) == 2
                and all(isinstance(v, (int, float)) for v in value)):
            return complex(value[0], value[1])
        raise RangeError(key, "expected a number or an [re, im] pair")
    if key == "init_cov":
        if isinstance(value, str):
            return value
        return value  # nested list; validated by ScenarioConfig
    if key == "include_fluctuation_drive":
        if not isinstance(value, bool):
            raise RangeError(key, "expected a boolean")
        return value
    if key == "cavity_bath":
        if not isinstance(value, str):
            raise RangeError(key, "expected a string")
        return value
    if key == "decimation":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise RangeError(key, "expected an integer")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RangeError(key, "expected a number")
    return value


def parse_config(text: str, scenario: str = None) -> tuple[SweepSpec,
                                                           ScenarioConfig]:
    """Resolve a configuration document against its scenario preset.

    The scenario argument (e.g. from a command-line flag) takes precedence
    over a "scenario" key in the document; with neither, the scenario is
    "custom". Returns the sweep spec (scenario, grids, parallelism) and the
    fully resolved single-point configuration.
    """
    if text.strip() == "":
        doc = {}
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("the configuration document must be a JSON object")

    known = set(_TOP_KEYS) | set(_PARAM_KEYS) | set(_SCENARIO_KEYS)
    for key in doc:
        if key not in known:
            raise UnknownKey(key)

    chosen = scenario if scenario is not None else doc.get("scenario", "custom")
    try:
        config = preset_config(chosen)
    except ConfigInvalid as exc:
        raise RangeError("scenario", str(exc)) from exc

    for key in _PARAM_KEYS + _SCENARIO_KEYS:
        if key not in doc:
            continue
        try:
            config = apply_overrides(config, {key: _coerce(key, doc[key])})
        except (ValueError, TypeError) as exc:
            raise RangeError(key, str(exc)) from exc

    grid = doc.get("grid", {})
    if not isinstance(grid, dict):
        raise RangeError("grid", "expected an object of key -> value list")
    overrides = []
    for key in grid:
        values = grid[key]
        if not isinstance(values, list) or not values:
            raise RangeError(f"grid.{key}", "expected a non-empty list")
        coerced = tuple(_coerce(key, v) for v in values)
        overrides.append((key, coerced))

    parallelism = doc.get("parallelism", 1)
    if isinstance(parallelism, bool) or not isinstance(parallelism, int):
        raise RangeError("parallelism", "expected an integer")
    try:
        spec = SweepSpec(scenario=chosen, overrides=tuple(overrides),
                         parallelism=parallelism)
    except ConfigInvalid as exc:
        raise RangeError("grid", str(exc)) from exc
    return spec, config


def resolved_dict(spec: SweepSpec, config: ScenarioConfig) -> dict:
    """Flat, JSON-ready echo of a fully resolved configuration."""
    def _json_value(v):
        return [v.real, v.imag] if isinstance(v, complex) else v

    doc = {"scenario": spec.scenario, "parallelism": spec.parallelism,
           "grid": {key: [_json_value(v) for v in values]
                    for key, values in spec.overrides}}
    for key in _PARAM_KEYS:
        doc[key] = getattr(config.params, key)
    for key in _SCENARIO_KEYS:
        value = getattr(config, key)
        if key in _COMPLEX_KEYS:
            value = [value.real, value.imag]
        elif key == "init_cov" and not isinstance(value, str):
            value = [[float(x) for x in row] for row in value]
        doc[key] = value
    return doc


def serialize_config(spec: SweepSpec, config: ScenarioConfig) -> str:
    """Canonical document for a resolved configuration (byte-stable)."""
    return json.dumps(resolved_dict(spec, config), indent=2,
                      sort_keys=True) + "\n"
