"""Layered system model: layer specs, decoupling checks, effective frequencies and shifts.

Units throughout: ħ = 1, reference frequency ω₀ = 1, reference mass 1. Energies are
in ħω₀, lengths in √(ħ/mω₀), squared frequencies in ω₀².
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import DomainError, ModelError

logger = logging.getLogger(__name__)

DECOUPLING_TOLERANCE = 1e-10
DEFAULT_OMEGA12 = 3.0

INTRA_KINDS = ("none", "inverse_square", "delta", "harmonic")


@dataclass(frozen=True)
class IntraPotential:
    """Intra-layer two-body interaction of a doubly occupied layer.

    A delta interaction is given either by an absolute ``scattering_length``
    (trap length units) or by ``scattering_ratio`` = a/b_ω, applied per layer.
    """
    kind: str = "none"
    g: float = 0.0
    scattering_length: Optional[float] = None
    scattering_ratio: Optional[float] = None
    omega: float = 0.0

    def __post_init__(self):
        if self.kind not in INTRA_KINDS:
            raise ModelError(f"Unknown intra kind: {self.kind}. Available kinds: {list(INTRA_KINDS)}")
        if self.kind == "inverse_square" and not self.g >= 0.0:
            raise DomainError(f"inverse_square strength must be g >= 0, got {self.g}")
        if self.kind == "delta":
            given = [v for v in (self.scattering_length, self.scattering_ratio) if v is not None]
            if len(given) != 1:
                raise ModelError("delta needs exactly one of scattering_length or scattering_ratio")
            if not given[0] > 0.0:
                raise DomainError(f"delta scattering length must be positive, got {given[0]}")
        if self.kind == "harmonic" and not self.omega >= 0.0:
            raise ModelError(f"harmonic intra frequency must be >= 0, got {self.omega}")

    @classmethod
    def none(cls) -> 'IntraPotential':
        return cls()

    @classmethod
    def inverse_square(cls, g: float) -> 'IntraPotential':
        return cls(kind="inverse_square", g=float(g))

    @classmethod
    def delta(cls, scattering_length: Optional[float] = None,
              scattering_ratio: Optional[float] = None) -> 'IntraPotential':
        return cls(kind="delta", scattering_length=scattering_length, scattering_ratio=scattering_ratio)

    @classmethod
    def harmonic(cls, omega: float) -> 'IntraPotential':
        return cls(kind="harmonic", omega=float(omega))

    def a_over_b(self, b_omega: float) -> float:
        """Dimensionless a/b_ω of a delta interaction for a layer with oscillator length b_ω."""
        if self.kind != "delta":
            raise DomainError(f"a/b is only defined for delta interactions, not {self.kind}")
        if self.scattering_ratio is not None:
            return self.scattering_ratio
        return self.scattering_length / b_omega

    @property
    def strength(self) -> float:
        """The scalar strength parameter of this kind (g, a, a/b or Ω)."""
        if self.kind == "inverse_square":
            return self.g
        if self.kind == "delta":
            return self.scattering_ratio if self.scattering_ratio is not None else self.scattering_length
        if self.kind == "harmonic":
            return self.omega
        return 0.0


@dataclass(frozen=True)
class LayerSpec:
    """One layer: one or two particles of equal mass in a trap of frequency omega0."""
    occupancy: int = 2
    mass: float = 1.0
    omega0: float = 1.0
    intra: IntraPotential = field(default_factory=IntraPotential)

    def __post_init__(self):
        if self.occupancy not in (1, 2):
            raise ModelError(f"occupancy must be 1 or 2, got {self.occupancy}")
        if not self.mass > 0.0:
            raise ModelError(f"layer mass must be positive, got {self.mass}")
        if not self.omega0 >= 0.0:
            raise ModelError(f"trap frequency omega0 must be >= 0, got {self.omega0}")
        if self.occupancy == 1 and self.intra.kind != "none":
            raise ModelError("a singly occupied layer cannot carry an intra-layer potential")

    @property
    def total_mass(self) -> float:
        return self.occupancy * self.mass


def _bond_count(occ_i: int, occ_k: int) -> int:
    return occ_i * occ_k


@dataclass(frozen=True)
class SystemSpec:
    """Full configuration of the layered system.

    ``interlayer_omega2[i][k]`` is the collapsed squared pair frequency ω_ik².
    ``bonds`` optionally keeps the particle-level values for a pair (i < k),
    ordered (ik, i'k', ik', i'k) for two doubles, (ik, i'k) or (ik, ik') when
    one side is single, and (ik,) for two singles.
    """
    dimension: int
    layers: tuple[LayerSpec, ...]
    interlayer_omega2: tuple[tuple[float, ...], ...]
    reference_mass: float = 1.0
    bonds: tuple[tuple[tuple[int, int], tuple[float, ...]], ...] = ()

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ModelError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        n = len(self.layers)
        if n < 1:
            raise ModelError("at least one layer is required")
        if not self.reference_mass > 0.0:
            raise ModelError(f"reference mass must be positive, got {self.reference_mass}")
        matrix = self.interlayer_omega2
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ModelError(f"interlayer_omega2 must be {n}x{n}")
        for i in range(n):
            if matrix[i][i] != 0.0:
                raise ModelError(f"interlayer_omega2 diagonal must be zero, layer {i + 1} has {matrix[i][i]}")
            for k in range(i + 1, n):
                if matrix[i][k] < 0.0 or matrix[k][i] < 0.0:
                    raise ModelError(f"negative squared frequency between layers {i + 1} and {k + 1}")
                if abs(matrix[i][k] - matrix[k][i]) > 1e-12 * max(1.0, abs(matrix[i][k])):
                    raise ModelError(f"interlayer_omega2 is not symmetric at ({i + 1}, {k + 1})")
        for (i, k), values in self.bonds:
            if not 0 <= i < k < n:
                raise ModelError(f"bond pair ({i + 1}, {k + 1}) must have i < k within 1..{n}")
            expected = _bond_count(self.layers[i].occupancy, self.layers[k].occupancy)
            if len(values) != expected:
                raise ModelError(
                    f"pair ({i + 1}, {k + 1}) needs {expected} bond values, got {len(values)}"
                )
            if any(v < 0.0 for v in values):
                raise ModelError(f"negative squared bond frequency in pair ({i + 1}, {k + 1})")
            mean = sum(values) / len(values)
            if abs(mean - matrix[i][k]) > 1e-12 * max(1.0, mean):
                raise ModelError(f"pair ({i + 1}, {k + 1}) collapsed frequency does not match its bonds")

    @classmethod
    def build(cls, dimension: int, layers: Sequence[LayerSpec],
              omega2: Mapping[tuple[int, int], float] | Sequence[Sequence[float]] | None = None,
              bonds: Optional[Mapping[tuple[int, int], Sequence[float]]] = None,
              reference_mass: float = 1.0) -> 'SystemSpec':
        """Create a spec from 0-based pair maps; explicit bonds are collapsed to their mean."""
        n = len(layers)
        matrix = [[0.0] * n for _ in range(n)]
        if omega2 is not None:
            if isinstance(omega2, Mapping):
                items = omega2.items()
            else:
                items = (((i, k), omega2[i][k]) for i in range(n) for k in range(n) if i != k)
            for (i, k), value in items:
                matrix[i][k] = float(value)
                matrix[k][i] = float(value)
        stored = []
        for (i, k), values in sorted((bonds or {}).items()):
            if i > k:
                raise ModelError(f"bond pairs must be given with i < k, got ({i + 1}, {k + 1})")
            values = tuple(float(v) for v in values)
            if values:
                mean = sum(values) / len(values)
                matrix[i][k] = mean
                matrix[k][i] = mean
            stored.append(((i, k), values))
        return cls(
            dimension=int(dimension),
            layers=tuple(layers),
            interlayer_omega2=tuple(tuple(row) for row in matrix),
            reference_mass=float(reference_mass),
            bonds=tuple(stored),
        )

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def omega0(self) -> tuple[float, ...]:
        return tuple(layer.omega0 for layer in self.layers)

    @property
    def total_masses(self) -> np.ndarray:
        return np.array([layer.total_mass for layer in self.layers])

    def omega2_matrix(self) -> np.ndarray:
        return np.array(self.interlayer_omega2, dtype=float)

    def pairs(self) -> Iterable[tuple[int, int]]:
        n = self.n_layers
        for i in range(n):
            for k in range(i + 1, n):
                yield i, k

    def bond_values(self, i: int, k: int) -> tuple[float, ...]:
        """Particle-level squared frequencies of pair (i, k), i < k."""
        for pair, values in self.bonds:
            if pair == (i, k):
                return values
        count = _bond_count(self.layers[i].occupancy, self.layers[k].occupancy)
        return (self.interlayer_omega2[i][k],) * count

    def particle_bonds(self, i: int, k: int) -> list[tuple[int, int, float]]:
        """(particle in i, particle in k, ω²) triples for the pair, i < k; particle 1 is the primed one."""
        values = self.bond_values(i, k)
        occ_i, occ_k = self.layers[i].occupancy, self.layers[k].occupancy
        if occ_i == 2 and occ_k == 2:
            return [(0, 0, values[0]), (1, 1, values[1]), (0, 1, values[2]), (1, 0, values[3])]
        if occ_i == 2:
            return [(0, 0, values[0]), (1, 0, values[1])]
        if occ_k == 2:
            return [(0, 0, values[0]), (0, 1, values[1])]
        return [(0, 0, values[0])]

    def summary(self) -> str:
        occupancies = "".join(str(layer.occupancy) for layer in self.layers)
        kinds = sorted({layer.intra.kind for layer in self.layers if layer.occupancy == 2})
        return f"N={self.n_layers} D={self.dimension} occupancy={occupancies} intra={kinds or ['-']}"


@dataclass(frozen=True)
class ShiftModel:
    """Dimensionless binding constants e_ik >= 0; ``default`` applies to every unlisted pair."""
    default: float = 0.0
    pairs: tuple[tuple[tuple[int, int], float], ...] = ()

    def __post_init__(self):
        if self.default < 0.0:
            raise ModelError(f"binding constant e must be >= 0, got {self.default}")
        for (i, k), value in self.pairs:
            if value < 0.0:
                raise ModelError(f"binding constant e for pair ({i + 1}, {k + 1}) must be >= 0, got {value}")

    @classmethod
    def uniform(cls, e: float, overrides: Optional[Mapping[tuple[int, int], float]] = None) -> 'ShiftModel':
        stored = tuple(sorted(((min(i, k), max(i, k)), float(v)) for (i, k), v in (overrides or {}).items()))
        return cls(default=float(e), pairs=stored)

    def e(self, i: int, k: int) -> float:
        key = (min(i, k), max(i, k))
        for pair, value in self.pairs:
            if pair == key:
                return value
        return self.default


@dataclass(frozen=True)
class DecouplingReport:
    """Residuals of the decoupling conditions.

    ``satisfied`` covers the relative-relative condition and pair-mass equality;
    ``exact`` additionally requires the relative to center-of-mass couplings to vanish.
    """
    satisfied: bool
    worst_violation: float
    violating_pairs: tuple[tuple[int, int], ...]
    cm_coupling_residual: float = 0.0
    exact: bool = True


def pair_residuals(spec: SystemSpec, i: int, k: int) -> tuple[float, float]:
    """(relative-relative residual, relative-CM residual) of one pair, in ω₀²."""
    values = spec.bond_values(i, k)
    occ_i, occ_k = spec.layers[i].occupancy, spec.layers[k].occupancy
    if occ_i == 2 and occ_k == 2:
        a, b, c, d = values
        relative = abs(a + b - c - d)
        cm = max(abs(a + c - b - d), abs(a + d - b - c))
        return relative, cm
    if occ_i == 2 or occ_k == 2:
        # the double-layer relative coordinate couples to the single particle unless both bonds match
        residual = abs(values[0] - values[1])
        return residual, residual
    return 0.0, 0.0


def validate_decoupling(spec: SystemSpec, tolerance: float = DECOUPLING_TOLERANCE) -> DecouplingReport:
    """Check the frequency and mass conditions under which relative layer motion separates."""
    worst = 0.0
    worst_cm = 0.0
    violating = []
    for i, k in spec.pairs():
        relative, cm = pair_residuals(spec, i, k)
        worst = max(worst, relative)
        worst_cm = max(worst_cm, cm)
        if relative > tolerance:
            violating.append((i, k))
    satisfied = worst <= tolerance
    exact = satisfied and worst_cm <= tolerance
    if satisfied and not exact:
        logger.warning(
            f"Decoupling holds for relative coordinates but residual center-of-mass coupling is {worst_cm:.3e}"
        )
    return DecouplingReport(
        satisfied=satisfied,
        worst_violation=worst,
        violating_pairs=tuple(violating),
        cm_coupling_residual=worst_cm,
        exact=exact,
    )


def _require_double(spec: SystemSpec, k: int) -> LayerSpec:
    if not 0 <= k < spec.n_layers:
        raise ModelError(f"layer index {k} out of range 0..{spec.n_layers - 1}")
    layer = spec.layers[k]
    if layer.occupancy != 2:
        raise ModelError(f"layer {k + 1} is singly occupied and has no relative coordinate")
    return layer


def effective_intra_frequency(spec: SystemSpec, k: int) -> float:
    """ω_k felt by the relative coordinate of doubly occupied layer k (0-based)."""
    layer = _require_double(spec, k)
    omega2 = layer.omega0 ** 2
    for i in range(spec.n_layers):
        if i == k:
            continue
        other = spec.layers[i]
        weight = other.mass / (other.mass + layer.mass)
        lo, hi = min(i, k), max(i, k)
        per_particle: dict[int, float] = {}
        for p_lo, p_hi, w in spec.particle_bonds(lo, hi):
            q = p_lo if i == lo else p_hi
            per_particle[q] = per_particle.get(q, 0.0) + w
        for total in per_particle.values():
            omega2 += weight * total / 2.0
    return math.sqrt(omega2)


def layer_reduced_mass(spec: SystemSpec, k: int) -> float:
    """Reduced mass μ_kk = m_k/2 of the intra-layer pair."""
    return _require_double(spec, k).mass / 2.0


def oscillator_length(spec: SystemSpec, k: int) -> float:
    """b_ω = √(ħ/(μ_kk ω_k)) of layer k."""
    return 1.0 / math.sqrt(layer_reduced_mass(spec, k) * effective_intra_frequency(spec, k))


def zero_point_shift(spec: SystemSpec, shifts: ShiftModel) -> float:
    """V^(shift): each bond contributes −D (e_ik + 1) ω_pq / 2."""
    total = 0.0
    for i, k in spec.pairs():
        e = shifts.e(i, k)
        for _, _, w in spec.particle_bonds(i, k):
            if w > 0.0:
                total -= spec.dimension * (e + 1.0) * math.sqrt(w) / 2.0
    return total


def cm_frequency(spec: SystemSpec) -> float:
    """ω_CM² = Σ M_k ω_0k² / Σ M_k."""
    masses = spec.total_masses
    omega0 = np.array(spec.omega0)
    return math.sqrt(float(np.dot(masses, omega0 ** 2) / masses.sum()))


def default_chain(n_layers: int, dimension: int = 1, intra: Optional[IntraPotential] = None,
                  omega12: float = DEFAULT_OMEGA12, omega0: float = 1.0, mass: float = 1.0) -> SystemSpec:
    """Doubly occupied nearest-neighbor chain with equal masses (default ω_12 = 3ω₀)."""
    if n_layers < 1:
        raise ModelError(f"n_layers must be >= 1, got {n_layers}")
    layer = LayerSpec(occupancy=2, mass=mass, omega0=omega0, intra=intra or IntraPotential.none())
    omega2 = {(i, i + 1): omega12 ** 2 for i in range(n_layers - 1)}
    return SystemSpec.build(dimension, [layer] * n_layers, omega2)


def single_string(spec: SystemSpec) -> SystemSpec:
    """Occupancy-1 copy of a spec, same masses, traps and pair frequencies."""
    layers = [LayerSpec(occupancy=1, mass=layer.mass, omega0=layer.omega0) for layer in spec.layers]
    return SystemSpec.build(spec.dimension, layers, spec.interlayer_omega2,
                            reference_mass=spec.reference_mass)


def uniform_coupling(n_layers: int, omega_r: float, dimension: int = 1, omega0: float = 1.0,
                     mass: float = 1.0, intra: Optional[IntraPotential] = None) -> SystemSpec:
    """Every layer pair coupled with the same frequency ω_r."""
    layer = LayerSpec(occupancy=2, mass=mass, omega0=omega0, intra=intra or IntraPotential.none())
    omega2 = {(i, k): omega_r ** 2 for i in range(n_layers) for k in range(i + 1, n_layers)}
    return SystemSpec.build(dimension, [layer] * n_layers, omega2)


def with_intra(spec: SystemSpec, intra: IntraPotential) -> SystemSpec:
    """Replace the intra potential of every doubly occupied layer."""
    layers = tuple(replace(layer, intra=intra) if layer.occupancy == 2 else layer for layer in spec.layers)
    return replace(spec, layers=layers)


def scaled(spec: SystemSpec, factor: float) -> SystemSpec:
    """Multiply every frequency by ``factor``; absolute lengths scale as factor^(-1/2)."""
    if not factor > 0.0:
        raise ModelError(f"scale factor must be positive, got {factor}")
    length_scale = 1.0 / math.sqrt(factor)
    layers = []
    for layer in spec.layers:
        intra = layer.intra
        if intra.kind == "harmonic":
            intra = replace(intra, omega=intra.omega * factor)
        elif intra.kind == "delta" and intra.scattering_length is not None:
            intra = replace(intra, scattering_length=intra.scattering_length * length_scale)
        layers.append(replace(layer, omega0=layer.omega0 * factor, intra=intra))
    f2 = factor * factor
    return SystemSpec(
        dimension=spec.dimension,
        layers=tuple(layers),
        interlayer_omega2=tuple(tuple(v * f2 for v in row) for row in spec.interlayer_omega2),
        reference_mass=spec.reference_mass,
        bonds=tuple((pair, tuple(v * f2 for v in values)) for pair, values in spec.bonds),
    )
