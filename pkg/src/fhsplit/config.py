"""YAML scenario bundle files.

A bundle file has the sections ``scenario``, ``radio``, ``service``,
``quantization`` and ``load``, keyed by the dataclass field names in
:mod:`fhsplit.model`. ``mcs_table`` (list of ``{m, rc}``) and ``overrides``
are optional. Unknown keys are rejected. Omitted optional fields take the
reference defaults carried by the dataclasses.

Example::

    scenario:
      name: SC1
      altitude_km: 600.0
      num_cells: 19
    radio:
      band: S
      bandwidth_hz: 30000000.0
      beam_radius_km: 25.0
    service:
      service: eMBB
      ue_density_per_km2: 0.1
      reference_peak_rate_bps: 2000000.0
      reference_bandwidth_hz: 5000000.0
      modulation_order: 16
      code_rate: 0.64
"""

from __future__ import annotations

import os
import re
from dataclasses import MISSING, fields
from pathlib import Path

import yaml

from ._io import write_text_atomic
from .model import (
    Band,
    Bundle,
    LoadModel,
    McsTable,
    QuantizationConfig,
    RadioConfig,
    ScenarioConfig,
    Service,
    ServiceProfile,
    preset_bundles,
    validate,
)

__all__ = [
    "ConfigError",
    "ParseError",
    "SchemaError",
    "FIXTURE_DIR",
    "load_bundle",
    "save_bundle",
    "loads_bundle",
    "dumps_bundle",
    "load_mcs_table",
    "parse_mcs_table",
    "fixture_name",
    "fixture_path",
]

FIXTURE_DIR = Path(__file__).parent / "fixtures"
FIXTURE_EXT = ".yaml"


class _Loader(getattr(yaml, "CSafeLoader", yaml.SafeLoader)):
    """Safe loader that also reads YAML 1.2 floats such as ``30e6``."""


class _Dumper(getattr(yaml, "CSafeDumper", yaml.SafeDumper)):
    """Quotes strings that :class:`_Loader` would otherwise read as floats."""


_EXP_FLOAT = re.compile(r"^[-+]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)[eE][-+]?[0-9]+$")
for _cls in (_Loader, _Dumper):
    _cls.add_implicit_resolver("tag:yaml.org,2002:float", _EXP_FLOAT, list("-+0123456789."))


class ConfigError(Exception):
    pass


class ParseError(ConfigError):
    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: "
        prefix = f"{source}: " if source else ""
        super().__init__(f"{prefix}{where}{message}")


class SchemaError(ConfigError):
    pass


# section -> (dataclass, {field: kind}); total_antennas is derived and read-only
_SECTIONS = {
    "scenario": (ScenarioConfig, {
        "name": "str",
        "altitude_km": "real",
        "num_cells": "int",
        "beams_per_cell": "int",
        "antenna_elements_per_beam": "int",
    }),
    "radio": (RadioConfig, {
        "band": Band,
        "bandwidth_hz": "real",
        "beam_radius_km": "real",
        "oversampling": "real",
        "numerology": "int",
        "cp_duration_s": "real",
        "subframe_duration_s": "real",
        "symbols_per_subframe": "int",
        "subcarriers_per_rb": "int",
        "data_res_per_rb": "int",
    }),
    "service": (ServiceProfile, {
        "service": Service,
        "ue_density_per_km2": "real",
        "reference_peak_rate_bps": "real",
        "reference_bandwidth_hz": "real",
        "modulation_order": "int",
        "code_rate": "real",
        "num_layers": "int",
        "reference_layers": "int",
        "reference_modulation": "int",
        "ul_fraction": "real",
        "ul_content_size_bytes": "real",
    }),
    "quantization": (QuantizationConfig, {
        "q_time_bits": "int",
        "q_freq_bits": "int",
        "q_llr_bits": "int",
    }),
    "load": (LoadModel, {
        "utilization": "real",
        "signaling_time_base_s": "real",
    }),
}
_REQUIRED_SECTIONS = ("scenario", "radio", "service")
_OVERRIDES = {
    "per_user_scaling": "bool",
    "custom_reference_modulation": "bool",
    "signaling_time_base_s": "real",
}
_TOP_LEVEL = set(_SECTIONS) | {"mcs_table", "overrides"}


def _coerce(path, value, kind):
    if isinstance(kind, type):  # enum
        try:
            return kind(value)
        except ValueError:
            raise SchemaError(
                f"{path}: expected one of {[e.value for e in kind]}, got {value!r}"
            ) from None
    if kind == "str":
        if not isinstance(value, str):
            raise SchemaError(f"{path}: expected a string, got {value!r}")
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            raise SchemaError(f"{path}: expected true/false, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}: expected a number, got {value!r}")
    if kind == "int":
        if isinstance(value, float):
            if not value.is_integer():
                raise SchemaError(f"{path}: expected an integer, got {value!r}")
            value = int(value)
        return value
    return float(value)


def _section(doc, name):
    cls, schema = _SECTIONS[name]
    raw = doc.get(name)
    if raw is None:
        if name in _REQUIRED_SECTIONS:
            raise SchemaError(f"missing required section {name!r}")
        raw = {}
    if not isinstance(raw, dict):
        raise SchemaError(f"section {name!r} must be a mapping")
    allowed = set(schema) | ({"total_antennas"} if name == "scenario" else set())
    unknown = sorted(set(raw) - allowed, key=str)
    if unknown:
        raise SchemaError(f"{name}: unknown key(s) {', '.join(map(str, unknown))}")
    kwargs = {k: _coerce(f"{name}.{k}", v, schema[k]) for k, v in raw.items() if k in schema}
    missing = [
        f.name for f in fields(cls)
        if f.init and f.default is MISSING and f.default_factory is MISSING and f.name not in kwargs
    ]
    if missing:
        raise SchemaError(f"{name}: missing required key(s) {', '.join(missing)}")
    obj = cls(**kwargs)
    if "total_antennas" in raw:
        declared = _coerce("scenario.total_antennas", raw["total_antennas"], "int")
        if declared != obj.total_antennas:
            raise SchemaError(
                f"scenario.total_antennas: declared {declared}, derived {obj.total_antennas}"
            )
    return obj


def parse_mcs_table(raw, path="mcs_table") -> McsTable:
    if not isinstance(raw, list):
        raise SchemaError(f"{path}: expected a list of {{m, rc}} entries")
    pairs = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise SchemaError(f"{path}[{i}]: expected a mapping with keys m, rc")
        unknown = set(entry) - {"m", "rc"}
        if unknown:
            raise SchemaError(f"{path}[{i}]: unknown key(s) {', '.join(map(str, sorted(unknown, key=str)))}")
        if "m" not in entry or "rc" not in entry:
            raise SchemaError(f"{path}[{i}]: both m and rc are required")
        pairs.append((
            _coerce(f"{path}[{i}].m", entry["m"], "int"),
            _coerce(f"{path}[{i}].rc", entry["rc"], "real"),
        ))
    return McsTable(tuple(pairs))


def _parse_yaml(text, source=None):
    try:
        return yaml.load(text, Loader=_Loader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ParseError(exc.problem or str(exc), line, col, source) from None
    except yaml.YAMLError as exc:
        raise ParseError(str(exc), source=source) from None


def bundle_from_dict(doc) -> Bundle:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a mapping of sections")
    unknown = sorted(set(doc) - _TOP_LEVEL, key=str)
    if unknown:
        raise SchemaError(f"unknown section(s) {', '.join(map(str, unknown))}")
    parts = {name: _section(doc, name) for name in _SECTIONS}

    overrides = doc.get("overrides") or {}
    if not isinstance(overrides, dict):
        raise SchemaError("section 'overrides' must be a mapping")
    bad = sorted(set(overrides) - set(_OVERRIDES), key=str)
    if bad:
        raise SchemaError(f"overrides: unknown key(s) {', '.join(map(str, bad))}")
    ov = {k: _coerce(f"overrides.{k}", v, _OVERRIDES[k]) for k, v in overrides.items()}
    if "signaling_time_base_s" in ov:
        load_raw = doc.get("load") or {}
        if "signaling_time_base_s" in load_raw and load_raw["signaling_time_base_s"] != ov["signaling_time_base_s"]:
            raise SchemaError("signaling_time_base_s given in both load and overrides with different values")
        parts["load"] = LoadModel(parts["load"].utilization, ov["signaling_time_base_s"])

    mcs = None
    if doc.get("mcs_table") is not None:
        mcs = parse_mcs_table(doc["mcs_table"])

    bundle = Bundle(
        **parts,
        per_user_scaling=ov.get("per_user_scaling", True),
        custom_reference_modulation=ov.get("custom_reference_modulation", False),
        mcs_table=mcs,
    )
    return validate(bundle)


def loads_bundle(text: str, source=None) -> Bundle:
    return bundle_from_dict(_parse_yaml(text, source))


def load_bundle(path) -> Bundle:
    """Read, schema-check and validate a bundle file.

    Raises ParseError, SchemaError or model.InvariantViolation.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads_bundle(text, source=os.fspath(path))


def bundle_to_dict(bundle: Bundle) -> dict:
    doc = {}
    for name, (_, schema) in _SECTIONS.items():
        obj = getattr(bundle, name)
        sec = {}
        for key in schema:
            value = getattr(obj, key)
            sec[key] = value.value if hasattr(value, "value") else value
        doc[name] = sec
    overrides = {}
    if not bundle.per_user_scaling:
        overrides["per_user_scaling"] = False
    if bundle.custom_reference_modulation:
        overrides["custom_reference_modulation"] = True
    if overrides:
        doc["overrides"] = overrides
    if bundle.mcs_table is not None:
        doc["mcs_table"] = [{"m": m, "rc": rc} for m, rc in bundle.mcs_table]
    return doc


def dumps_bundle(bundle: Bundle) -> str:
    # PyYAML renders floats with repr(), which round-trips exactly.
    return yaml.dump(
        bundle_to_dict(bundle), Dumper=_Dumper, sort_keys=False, default_flow_style=False
    )


def save_bundle(bundle: Bundle, path) -> None:
    validate(bundle)
    write_text_atomic(path, dumps_bundle(bundle))


def load_mcs_table(path) -> McsTable:
    """Read an MCS table from a file holding a top-level ``mcs_table`` list."""
    with open(path, encoding="utf-8") as fh:
        doc = _parse_yaml(fh.read(), os.fspath(path))
    if isinstance(doc, dict):
        unknown = set(doc) - _TOP_LEVEL
        if unknown:
            raise SchemaError(f"unknown section(s) {', '.join(map(str, sorted(unknown, key=str)))}")
        doc = doc.get("mcs_table")
    table = parse_mcs_table(doc)
    problems = table.problems()
    if problems:
        raise SchemaError("; ".join(problems))
    return table


def fixture_name(bundle_or_name) -> str:
    """``"SC1-S-eMBB"`` -> ``"sc1_s_embb"``."""
    name = bundle_or_name if isinstance(bundle_or_name, str) else bundle_or_name.name
    return name.replace("-", "_").lower()


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / f"{fixture_name(name)}{FIXTURE_EXT}"


def write_fixtures(directory=FIXTURE_DIR) -> list[Path]:
    """Regenerate the preset fixture files."""
    out = []
    for name, bundle in preset_bundles().items():
        path = Path(directory) / f"{fixture_name(name)}{FIXTURE_EXT}"
        save_bundle(bundle, path)
        out.append(path)
    return out
