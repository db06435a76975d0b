"""Data Transfer Objects for spec files and CLI runs."""
from dataclasses import dataclass
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from disjoint.core.model import IntraPotential, LayerSpec, ShiftModel, SystemSpec

SUBCOMMANDS = ("check", "modes", "spectrum", "intra", "separation", "sweep", "verify")

Pair = tuple[int, int]


class LayerSection(BaseModel):
    """One `[layer.k]` section, or the top-level layer defaults."""
    occupancy: int = Field(2, description="Particles in the layer", ge=1, le=2)
    mass: float = Field(1.0, description="Particle mass (reference mass units)", gt=0)
    omega0: float = Field(1.0, description="Trap frequency (w0)", ge=0)
    intra: Literal["none", "inverse_square", "delta", "harmonic"] = Field(
        "none", description="Intra-layer interaction kind"
    )
    g: Optional[float] = Field(None, description="Inverse-square strength", ge=0)
    scattering_length: Optional[float] = Field(None, description="Absolute delta scattering length", gt=0)
    scattering_ratio: Optional[float] = Field(None, description="Delta scattering length a/b per layer", gt=0)
    omega: Optional[float] = Field(None, description="Harmonic intra frequency (w0)", ge=0)

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {"occupancy": 2, "mass": 1.0, "omega0": 1.0, "intra": "inverse_square", "g": 1.0}
        }

    def to_potential(self) -> IntraPotential:
        if self.intra == "inverse_square":
            return IntraPotential.inverse_square(self.g or 0.0)
        if self.intra == "delta":
            return IntraPotential.delta(self.scattering_length, self.scattering_ratio)
        if self.intra == "harmonic":
            return IntraPotential.harmonic(self.omega or 0.0)
        return IntraPotential.none()

    def to_layer(self) -> LayerSpec:
        return LayerSpec(occupancy=self.occupancy, mass=self.mass, omega0=self.omega0,
                         intra=self.to_potential())

    @classmethod
    def from_layer(cls, layer: LayerSpec) -> 'LayerSection':
        intra = layer.intra
        return cls(
            occupancy=layer.occupancy,
            mass=layer.mass,
            omega0=layer.omega0,
            intra=intra.kind,
            g=intra.g if intra.kind == "inverse_square" else None,
            scattering_length=intra.scattering_length if intra.kind == "delta" else None,
            scattering_ratio=intra.scattering_ratio if intra.kind == "delta" else None,
            omega=intra.omega if intra.kind == "harmonic" else None,
        )


class SystemSection(BaseModel):
    """Top-level keys of a spec file."""
    preset: Optional[Literal["paper-default"]] = Field(None, description="Named preset")
    dimension: int = Field(1, description="Spatial dimension D", ge=1, le=3)
    layers: int = Field(..., description="Number of layers N", ge=1)
    omega0_units: str = Field("w0", description="Frequency unit tag")
    reference_mass: float = Field(1.0, description="Reference mass", gt=0)
    omega12: float = Field(3.0, description="Nearest-neighbor frequency used by the preset (w0)", ge=0)

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {"preset": "paper-default", "dimension": 1, "layers": 30, "omega0_units": "w0"}
        }

    @field_validator("omega0_units")
    @classmethod
    def check_units(cls, value: str) -> str:
        if value != "w0":
            raise ValueError(f"units mismatch: frequencies must be given in w0, got {value!r}")
        return value


class CouplingSection(BaseModel):
    """The `[coupling]` section; pairs are 1-based with i < k."""
    omega2: dict[Pair, float] = Field(default_factory=dict, description="Squared pair frequencies (w0^2)")
    bonds: dict[Pair, list[float]] = Field(default_factory=dict,
                                           description="Particle-level squared frequencies per pair")

    class Config:
        extra = "forbid"

    @field_validator("omega2")
    @classmethod
    def check_omega2(cls, value: dict[Pair, float]) -> dict[Pair, float]:
        for (i, k), w in value.items():
            if w < 0.0:
                raise ValueError(f"omega2.{i}.{k} must be >= 0, got {w}")
        return value

    @field_validator("bonds")
    @classmethod
    def check_bonds(cls, value: dict[Pair, list[float]]) -> dict[Pair, list[float]]:
        for (i, k), ws in value.items():
            if len(ws) not in (1, 2, 4):
                raise ValueError(f"bonds.{i}.{k} needs 1, 2 or 4 values, got {len(ws)}")
            if any(w < 0.0 for w in ws):
                raise ValueError(f"bonds.{i}.{k} values must be >= 0")
        return value


class ShiftSection(BaseModel):
    """The `[shift]` section: default binding constant and per-pair overrides."""
    e: float = Field(0.0, description="Default binding constant", ge=0)
    pairs: dict[Pair, float] = Field(default_factory=dict, description="Per-pair binding constants")

    class Config:
        extra = "forbid"

    @field_validator("pairs")
    @classmethod
    def check_pairs(cls, value: dict[Pair, float]) -> dict[Pair, float]:
        for (i, k), e in value.items():
            if e < 0.0:
                raise ValueError(f"e.{i}.{k} must be >= 0, got {e}")
        return value


class RunSection(BaseModel):
    """The `[run]` section: parameters of the subcommands."""
    energy_cap: Optional[float] = Field(None, description="Absolute string energy cap (hbar w0)")
    count: int = Field(10, description="Number of string excitation energies", ge=1)
    n_min: int = Field(2, description="Smallest chain length of separation curves", ge=2)
    n_max: int = Field(60, description="Largest chain length of separation curves", ge=2)
    n_values: list[int] = Field(default_factory=list, description="Chain lengths of the E0/N table")
    strengths: list[float] = Field(default_factory=list, description="Intra strengths for intra/separation")
    levels: int = Field(3, description="Intra levels per layer", ge=1)
    axis: Optional[Literal["N", "g", "a1_over_b", "ln_b_over_a2"]] = Field(None, description="Sweep axis")
    start: Optional[float] = Field(None, description="First sweep value")
    stop: Optional[float] = Field(None, description="Last sweep value")
    num: int = Field(11, description="Number of sweep points", ge=0)
    random: int = Field(200, description="Random specs per verify suite", ge=1)

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {"n_max": 60, "strengths": [0.0, 1.0, 2.0, 3.0]}
        }

    @field_validator("n_values")
    @classmethod
    def check_n_values(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("n_values must be >= 1")
        return value

    @model_validator(mode="after")
    def check_ranges(self) -> 'RunSection':
        if self.n_min > self.n_max:
            raise ValueError(f"n_min={self.n_min} exceeds n_max={self.n_max}")
        if self.axis is not None and (self.start is None or self.stop is None):
            raise ValueError("a sweep axis needs start and stop")
        return self


class ConfigDocument(BaseModel):
    """Normalized content of a spec file, layer defaults already merged."""
    system: SystemSection
    layers: list[LayerSection]
    coupling: CouplingSection = Field(default_factory=CouplingSection)
    shift: ShiftSection = Field(default_factory=ShiftSection)
    run: RunSection = Field(default_factory=RunSection)

    @model_validator(mode="after")
    def check_layer_count(self) -> 'ConfigDocument':
        if len(self.layers) != self.system.layers:
            raise ValueError(f"expected {self.system.layers} layers, got {len(self.layers)}")
        return self


@dataclass(frozen=True)
class ParsedConfig:
    """A parsed spec file: the normalized document plus the physics objects built from it."""
    document: ConfigDocument
    spec: SystemSpec
    shifts: ShiftModel

    @property
    def run(self) -> RunSection:
        return self.document.run


class RunConfig(BaseModel):
    """One CLI invocation."""
    subcommand: Literal["check", "modes", "spectrum", "intra", "separation", "sweep", "verify"] = Field(
        ..., description="Subcommand to run"
    )
    config_path: Optional[str] = Field(None, description="Spec file path")
    output_path: Optional[str] = Field(None, description="Main CSV output path")
    seed: Optional[int] = Field(None, description="Seed of the verify suites", ge=0)
    threads: Optional[int] = Field(None, description="Sweep worker threads, 0 = auto", ge=0)

    class Config:
        json_schema_extra = {
            "example": {"subcommand": "modes", "config_path": "chain30.ini", "output_path": "modes.csv"}
        }

    @model_validator(mode="after")
    def check_paths(self) -> 'RunConfig':
        if self.subcommand != "verify" and not self.config_path:
            raise ValueError(f"subcommand {self.subcommand} needs --config")
        return self
