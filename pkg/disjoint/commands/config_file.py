"""Parsing and normalized serialization of line-oriented spec files.

A spec file is a sequence of ``key = value`` lines. Top-level keys describe the
system and the defaults of every layer; ``[layer.k]`` overrides layer k
(1-based), ``[coupling]`` holds ``omega2.i.k`` and ``bonds.i.k``, ``[shift]``
holds ``e`` and ``e.i.k``, and ``[run]`` the subcommand parameters. ``#``
starts a comment.
"""
import logging
import re
from dataclasses import dataclass
from typing import Any, Callable, Optional, Type

from pydantic import BaseModel, ValidationError

from disjoint.core.errors import ConfigError, DisjointError
from disjoint.core.model import ShiftModel, SystemSpec
from disjoint.dto.config_dto import (
    ConfigDocument, CouplingSection, LayerSection, ParsedConfig, RunSection, ShiftSection, SystemSection,
)

logger = logging.getLogger(__name__)

SECTION_PATTERN = re.compile(r"^\[\s*([A-Za-z_]+)(?:\.(\d+))?\s*\]$")
PAIR_PATTERN = re.compile(r"^(omega2|bonds|e)\.(\d+)\.(\d+)$")


def _floats(raw: str) -> list[float]:
    return [float(part) for part in raw.split(",") if part.strip()]


def _ints(raw: str) -> list[int]:
    return [int(part) for part in raw.split(",") if part.strip()]


def _text(raw: str) -> str:
    return raw.strip().strip('"')


SYSTEM_KEYS: dict[str, Callable[[str], Any]] = {
    "preset": _text,
    "dimension": int,
    "layers": int,
    "omega0_units": _text,
    "reference_mass": float,
    "omega12": float,
}

LAYER_KEYS: dict[str, Callable[[str], Any]] = {
    "occupancy": int,
    "mass": float,
    "omega0": float,
    "intra": _text,
    "g": float,
    "scattering_length": float,
    "scattering_ratio": float,
    "omega": float,
}

RUN_KEYS: dict[str, Callable[[str], Any]] = {
    "energy_cap": float,
    "count": int,
    "n_min": int,
    "n_max": int,
    "n_values": _ints,
    "strengths": _floats,
    "levels": int,
    "axis": _text,
    "start": float,
    "stop": float,
    "num": int,
    "random": int,
}

LIST_KEYS = ("n_values", "strengths")


@dataclass(frozen=True)
class Entry:
    key: str
    raw: str
    line: int


def _split_sections(text: str) -> tuple[dict[str, dict[str, Entry]], dict[str, int]]:
    sections: dict[str, dict[str, Entry]] = {"": {}}
    headers: dict[str, int] = {}
    current = ""
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        header = SECTION_PATTERN.match(line)
        if header:
            name, index = header.group(1), header.group(2)
            if name == "layer" and index is None:
                raise ConfigError("layer sections need an index, e.g. [layer.1]", line=number)
            if name != "layer" and index is not None:
                raise ConfigError(f"unknown section [{name}.{index}]", line=number)
            if name not in ("layer", "coupling", "shift", "run"):
                raise ConfigError(f"unknown section [{name}]", line=number)
            current = f"layer.{int(index)}" if name == "layer" else name
            if current in headers:
                raise ConfigError(f"duplicate section [{current}]", line=number)
            headers[current] = number
            sections[current] = {}
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=number)
        key, raw = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("missing key before '='", line=number)
        if key in sections[current]:
            raise ConfigError(f"duplicate key {key}", line=number, key=key)
        if not raw and key not in LIST_KEYS:
            raise ConfigError(f"missing value for {key}", line=number, key=key)
        sections[current][key] = Entry(key=key, raw=raw, line=number)
    return sections, headers


def _convert(entry: Entry, parser: Callable[[str], Any]) -> Any:
    try:
        return parser(entry.raw)
    except ValueError:
        raise ConfigError(f"invalid value {entry.raw!r} for {entry.key}", line=entry.line, key=entry.key)


def _validate(model: Type[BaseModel], data: dict[str, Any], entries: dict[str, Entry], label: str) -> Any:
    try:
        return model(**data)
    except ValidationError as e:
        error = e.errors()[0]
        field = str(error["loc"][0]) if error["loc"] else ""
        entry = entries.get(field)
        key = entry.key if entry else (field or label)
        message = error["msg"].removeprefix("Value error, ")
        raise ConfigError(f"{key}: {message}", line=entry.line if entry else None, key=key) from e


def _pair(entry: Entry, n_layers: int) -> tuple[str, tuple[int, int]]:
    match = PAIR_PATTERN.match(entry.key)
    if not match:
        raise ConfigError(f"unknown key {entry.key}", line=entry.line, key=entry.key)
    i, k = int(match.group(2)), int(match.group(3))
    if i == k or not (1 <= i <= n_layers and 1 <= k <= n_layers):
        raise ConfigError(f"{entry.key} does not name a pair of distinct layers 1..{n_layers}",
                          line=entry.line, key=entry.key)
    return match.group(1), (min(i, k), max(i, k))


def _parse_system(entries: dict[str, Entry]) -> tuple[SystemSection, dict[str, Any], dict[str, Entry]]:
    system_data, defaults = {}, {}
    system_entries, default_entries = {}, {}
    for key, entry in entries.items():
        if key in SYSTEM_KEYS:
            system_data[key] = _convert(entry, SYSTEM_KEYS[key])
            system_entries[key] = entry
        elif key in LAYER_KEYS:
            defaults[key] = _convert(entry, LAYER_KEYS[key])
            default_entries[key] = entry
        else:
            raise ConfigError(f"unknown key {key}", line=entry.line, key=key)
    if "layers" not in system_data:
        raise ConfigError("missing required key layers", key="layers")
    system = _validate(SystemSection, system_data, system_entries, "system")
    return system, defaults, default_entries


def _parse_layers(sections: dict[str, dict[str, Entry]], headers: dict[str, int], n_layers: int,
                  defaults: dict[str, Any], default_entries: dict[str, Entry]) -> list[LayerSection]:
    for name, line in headers.items():
        if name.startswith("layer.") and not 1 <= int(name.split(".")[1]) <= n_layers:
            raise ConfigError(f"[{name}] is outside layers 1..{n_layers}", line=line)
    layers = []
    for k in range(1, n_layers + 1):
        entries = sections.get(f"layer.{k}", {})
        data = dict(defaults)
        merged = dict(default_entries)
        for key, entry in entries.items():
            if key not in LAYER_KEYS:
                raise ConfigError(f"unknown key {key} in [layer.{k}]", line=entry.line, key=key)
            data[key] = _convert(entry, LAYER_KEYS[key])
            merged[key] = entry
        layers.append(_validate(LayerSection, data, merged, f"layer.{k}"))
    return layers


def _parse_coupling(entries: dict[str, Entry], n_layers: int) -> CouplingSection:
    omega2, bonds = {}, {}
    seen: dict[tuple[int, int], Entry] = {}
    for entry in entries.values():
        kind, pair = _pair(entry, n_layers)
        if kind == "e":
            raise ConfigError(f"{entry.key} belongs in [shift]", line=entry.line, key=entry.key)
        if pair in seen:
            raise ConfigError(f"pair {pair[0]}.{pair[1]} given twice ({seen[pair].key} and {entry.key})",
                              line=entry.line, key=entry.key)
        seen[pair] = entry
        if kind == "omega2":
            value = _convert(entry, float)
            if value < 0.0:
                raise ConfigError(f"{entry.key} must be >= 0, got {value}", line=entry.line, key=entry.key)
            omega2[pair] = value
        else:
            values = _convert(entry, _floats)
            if any(v < 0.0 for v in values):
                raise ConfigError(f"{entry.key} values must be >= 0", line=entry.line, key=entry.key)
            bonds[pair] = values
    return _validate(CouplingSection, {"omega2": omega2, "bonds": bonds}, {}, "coupling")


def _parse_shift(entries: dict[str, Entry], n_layers: int) -> ShiftSection:
    data: dict[str, Any] = {"pairs": {}}
    for key, entry in entries.items():
        if key == "e":
            data["e"] = _convert(entry, float)
            continue
        kind, pair = _pair(entry, n_layers)
        if kind != "e":
            raise ConfigError(f"{key} belongs in [coupling]", line=entry.line, key=key)
        data["pairs"][pair] = _convert(entry, float)
    try:
        return ShiftSection(**data)
    except ValidationError as e:
        entry = entries.get("e")
        raise ConfigError(f"[shift]: {e.errors()[0]['msg'].removeprefix('Value error, ')}",
                          line=entry.line if entry else None, key="e") from e


def _parse_run(entries: dict[str, Entry]) -> RunSection:
    data = {}
    for key, entry in entries.items():
        if key not in RUN_KEYS:
            raise ConfigError(f"unknown key {key} in [run]", line=entry.line, key=key)
        data[key] = _convert(entry, RUN_KEYS[key])
    return _validate(RunSection, data, entries, "run")


def _apply_preset(system: SystemSection, coupling: CouplingSection) -> CouplingSection:
    if system.preset != "paper-default":
        return coupling
    omega2 = dict(coupling.omega2)
    for i in range(1, system.layers):
        pair = (i, i + 1)
        if pair not in omega2 and pair not in coupling.bonds:
            omega2[pair] = system.omega12 ** 2
    return CouplingSection(omega2=omega2, bonds=coupling.bonds)


def build_spec(document: ConfigDocument) -> tuple[SystemSpec, ShiftModel]:
    """Physics objects of a document; pairs move from 1-based to 0-based."""
    spec = SystemSpec.build(
        dimension=document.system.dimension,
        layers=[section.to_layer() for section in document.layers],
        omega2={(i - 1, k - 1): v for (i, k), v in document.coupling.omega2.items()},
        bonds={(i - 1, k - 1): v for (i, k), v in document.coupling.bonds.items()},
        reference_mass=document.system.reference_mass,
    )
    shifts = ShiftModel.uniform(
        document.shift.e, {(i - 1, k - 1): v for (i, k), v in document.shift.pairs.items()}
    )
    return spec, shifts


def parse_config(text: str) -> ParsedConfig:
    """Parse spec-file text; every problem raises ConfigError with its line number."""
    sections, headers = _split_sections(text)
    system, defaults, default_entries = _parse_system(sections.pop(""))
    n = system.layers
    layers = _parse_layers(sections, headers, n, defaults, default_entries)
    coupling = _apply_preset(system, _parse_coupling(sections.get("coupling", {}), n))
    shift = _parse_shift(sections.get("shift", {}), n)
    run = _parse_run(sections.get("run", {}))
    document = ConfigDocument(system=system, layers=layers, coupling=coupling, shift=shift, run=run)
    try:
        spec, shifts = build_spec(document)
    except DisjointError as e:
        raise ConfigError(f"invalid system: {e}") from e
    logger.info(f"Parsed spec file: {spec.summary()}")
    return ParsedConfig(document=document, spec=spec, shifts=shifts)


def _number(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_number(v) for v in value)
    return str(value)


def serialize_config(spec: SystemSpec, shifts: Optional[ShiftModel] = None,
                     run: Optional[RunSection] = None) -> str:
    """Normalized text: explicit layers and pairs, no preset, repr floats."""
    lines = [
        f"dimension = {spec.dimension}",
        f"layers = {spec.n_layers}",
        "omega0_units = w0",
        f"reference_mass = {_number(spec.reference_mass)}",
    ]
    for k, layer in enumerate(spec.layers, start=1):
        lines += ["", f"[layer.{k}]"]
        section = LayerSection.from_layer(layer).model_dump(exclude_none=True)
        lines += [f"{key} = {_number(value)}" for key, value in section.items()]

    coupling = []
    stored = dict(spec.bonds)
    for i, k in spec.pairs():
        if (i, k) in stored:
            coupling.append(f"bonds.{i + 1}.{k + 1} = {_number(list(stored[(i, k)]))}")
        elif spec.interlayer_omega2[i][k] != 0.0:
            coupling.append(f"omega2.{i + 1}.{k + 1} = {_number(spec.interlayer_omega2[i][k])}")
    if coupling:
        lines += ["", "[coupling]"] + coupling

    shifts = shifts or ShiftModel()
    lines += ["", "[shift]", f"e = {_number(shifts.default)}"]
    lines += [f"e.{i + 1}.{k + 1} = {_number(value)}" for (i, k), value in shifts.pairs]

    if run is not None:
        values = run.model_dump(exclude_none=True)
        lines += ["", "[run]"]
        lines += [f"{key} = {_number(value)}" for key, value in values.items() if value != []]
    return "\n".join(lines) + "\n"
