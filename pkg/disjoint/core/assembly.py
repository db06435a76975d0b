"""Total energies, string-separation energies and parameter sweeps."""
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, TypeVar

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, ModelError
from .intralayer import intra_energy
from .model import (
    DEFAULT_OMEGA12, IntraPotential, ShiftModel, SystemSpec, effective_intra_frequency,
    layer_reduced_mass, default_chain, single_string, with_intra, zero_point_shift,
)
from .modes import NormalModeSet, build_interlayer_form, excitation_energies, normal_modes
from .solvers import solver_for

logger = logging.getLogger(__name__)

AXES = ("N", "g", "a1_over_b", "ln_b_over_a2")

SWEEP_COLUMNS = (
    "value", "n_layers", "e_string", "e_intra", "e_cm", "v_shift", "total", "total_per_layer",
    "mode_min", "mode_max", "string_gap", "intra_energy_k", "intra_msr",
    "delta_per_layer", "delta_shifted_per_layer",
)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class SweepConfig:
    """Configuration for parallel evaluation of sweep points."""
    threads: int = 0

    @classmethod
    def from_env(cls) -> 'SweepConfig':
        """Create config from environment variables."""
        raw = os.getenv('DISJOINT_THREADS', '0')
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(f"DISJOINT_THREADS must be an integer, got {raw!r}")
        return cls(threads=threads)

    def workers(self) -> int:
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1

    def map(self, func: Callable[[T], R], items: Sequence[T]) -> list[R]:
        """Evaluate in parallel; results keep input order."""
        if self.workers() == 1 or len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers()) as pool:
            return list(pool.map(func, items))


@dataclass(frozen=True)
class EnergyBudget:
    """Total energy split into string, intra-layer, center-of-mass and shift parts (ħω₀)."""
    e_string: float
    e_intra_per_layer: tuple[float, ...]
    e_cm: float
    v_shift: float
    total: float

    @classmethod
    def compose(cls, e_string: float, e_intra_per_layer: Sequence[float], e_cm: float,
                v_shift: float) -> 'EnergyBudget':
        intra = tuple(float(v) for v in e_intra_per_layer)
        return cls(
            e_string=float(e_string),
            e_intra_per_layer=intra,
            e_cm=float(e_cm),
            v_shift=float(v_shift),
            total=float(e_string) + sum(intra) + float(e_cm) + float(v_shift),
        )

    @property
    def e_intra(self) -> float:
        return sum(self.e_intra_per_layer)

    @property
    def unshifted(self) -> float:
        return self.total - self.v_shift


@dataclass(frozen=True)
class SeparationPoint:
    n_layers: int
    delta_per_layer: float
    delta_shifted_per_layer: float


@dataclass(frozen=True)
class SeparationCurve:
    """ΔE/N = (E_double − 2 E_single)/N per chain length, with and without the shift."""
    points: tuple[SeparationPoint, ...]
    dimension: int
    intra_kind: str
    strength: float


def _intra_energies(spec: SystemSpec, intra_indices: Optional[Sequence[int]] = None) -> list[float]:
    energies = []
    for k, layer in enumerate(spec.layers):
        if layer.occupancy != 2:
            energies.append(0.0)
            continue
        index = intra_indices[k] if intra_indices is not None else 0
        energies.append(intra_energy(layer.intra, spec.dimension, effective_intra_frequency(spec, k),
                                     layer_reduced_mass(spec, k), index))
    return energies


def _budget(spec: SystemSpec, shifts: ShiftModel, modes: NormalModeSet,
            string_quanta: Optional[Sequence[int]], cm_quanta: int,
            intra_indices: Optional[Sequence[int]]) -> EnergyBudget:
    half_d = 0.5 * spec.dimension
    freqs = modes.string_frequencies
    quanta = list(string_quanta) if string_quanta is not None else [0] * len(freqs)
    if len(quanta) != len(freqs):
        raise ModelError(f"expected {len(freqs)} string quanta, got {len(quanta)}")
    if intra_indices is not None and len(intra_indices) != spec.n_layers:
        raise ModelError(f"expected {spec.n_layers} intra indices, got {len(intra_indices)}")
    if any(n < 0 for n in quanta) or cm_quanta < 0:
        raise ModelError("quantum numbers must be non-negative")
    e_string = float(sum(w * (n + half_d) for w, n in zip(freqs, quanta)))
    e_cm = modes.cm_mode_frequency * (cm_quanta + half_d)
    return EnergyBudget.compose(
        e_string=e_string,
        e_intra_per_layer=_intra_energies(spec, intra_indices),
        e_cm=e_cm,
        v_shift=zero_point_shift(spec, shifts),
    )


def total_energy(spec: SystemSpec, shifts: Optional[ShiftModel] = None,
                 string_quanta: Optional[Sequence[int]] = None, cm_quanta: int = 0,
                 intra_indices: Optional[Sequence[int]] = None) -> EnergyBudget:
    """Energy budget of an arbitrary configuration: string quanta per non-CM mode, CM quanta, intra level per layer."""
    modes = normal_modes(build_interlayer_form(spec))
    return _budget(spec, shifts or ShiftModel(), modes, string_quanta, cm_quanta, intra_indices)


def total_ground_energy(spec: SystemSpec, shifts: Optional[ShiftModel] = None) -> EnergyBudget:
    """Ground-state budget: string zero point, intra ground states, CM zero point and shift."""
    return total_energy(spec, shifts)


def separation_energy(spec: SystemSpec, shifts: Optional[ShiftModel] = None) -> SeparationPoint:
    """(E_double − 2 E_single)/N for a doubly occupied spec and its single-string copy."""
    if any(layer.occupancy != 2 for layer in spec.layers):
        raise ModelError("separation energy needs every layer doubly occupied")
    shifts = shifts or ShiftModel()
    double = total_ground_energy(spec, shifts)
    single = total_ground_energy(single_string(spec), shifts)
    n = spec.n_layers
    return SeparationPoint(
        n_layers=n,
        delta_per_layer=(double.unshifted - 2.0 * single.unshifted) / n,
        delta_shifted_per_layer=(double.total - 2.0 * single.total) / n,
    )


def separation_curve(n_max: int, dimension: int, intra: IntraPotential,
                     shifts: Optional[ShiftModel] = None, n_min: int = 2,
                     omega12: float = DEFAULT_OMEGA12, omega0: float = 1.0,
                     config: Optional[SweepConfig] = None) -> SeparationCurve:
    """Separation energies per layer of nearest-neighbor chains N = n_min … n_max."""
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    config = config or SweepConfig.from_env()
    sizes = list(range(max(n_min, 2), n_max + 1))

    def point(n: int) -> SeparationPoint:
        result = separation_energy(default_chain(n, dimension, intra, omega12, omega0), shifts)
        logger.debug(f"Separation N={n}: {result.delta_per_layer:.6f} / shifted {result.delta_shifted_per_layer:.6f}")
        return result

    points = config.map(point, sizes)
    return SeparationCurve(points=tuple(points), dimension=dimension, intra_kind=intra.kind,
                           strength=intra.strength)


def ground_energy_per_layer(n_values: Sequence[int], dimension: int = 1,
                            intra: Optional[IntraPotential] = None,
                            shifts: Optional[ShiftModel] = None,
                            omega12: float = DEFAULT_OMEGA12) -> list[tuple[int, float]]:
    """(N, E₀/N) for doubly occupied nearest-neighbor chains, shift included."""
    rows = []
    for n in n_values:
        budget = total_ground_energy(default_chain(n, dimension, intra, omega12), shifts)
        rows.append((n, budget.total / n))
    return rows


def _family_potential(family: str, dimension: int, value: float) -> IntraPotential:
    if family == "inverse_square":
        return IntraPotential.inverse_square(value)
    if family == "delta" and dimension == 1:
        return IntraPotential.delta(scattering_ratio=10.0 ** value)
    if family == "delta" and dimension == 2:
        return IntraPotential.delta(scattering_ratio=math.exp(-value))
    raise DomainError(f"no strength family {family!r} in D={dimension}")


def critical_strength(n_layers: int, dimension: int, family: str, shifts: ShiftModel,
                      bracket: Optional[tuple[float, float]] = None,
                      omega12: float = DEFAULT_OMEGA12) -> float:
    """Strength where the shifted separation energy per layer crosses zero.

    The strength is g for inverse_square, a₁/b for the 1D delta and ln(b/a₂)
    for the 2D delta.
    """
    if family == "inverse_square":
        lo, hi = bracket or (0.0, 25.0)
    elif family == "delta" and dimension == 1:
        lo, hi = (math.log10(v) for v in (bracket or (1e-3, 1e3)))
    else:
        lo, hi = bracket or (-5.0, 20.0)

    def shifted(value: float) -> float:
        intra = _family_potential(family, dimension, value)
        spec = default_chain(n_layers, dimension, intra, omega12)
        return separation_energy(spec, shifts).delta_shifted_per_layer

    f_lo, f_hi = shifted(lo), shifted(hi)
    if f_lo * f_hi > 0.0:
        raise DomainError(
            f"shifted separation energy does not change sign on [{lo}, {hi}] ({f_lo:.4f}, {f_hi:.4f})"
        )
    root = brentq(shifted, lo, hi, xtol=1e-10)
    if family == "delta" and dimension == 1:
        return 10.0 ** root
    return root


def _first_double(spec: SystemSpec) -> Optional[int]:
    for k, layer in enumerate(spec.layers):
        if layer.occupancy == 2:
            return k
    return None


def _resized(template: SystemSpec, n_layers: int) -> SystemSpec:
    first = template.layers[0]
    omega12 = math.sqrt(template.interlayer_omega2[0][1]) if template.n_layers > 1 else DEFAULT_OMEGA12
    spec = default_chain(n_layers, template.dimension, first.intra, omega12, first.omega0, first.mass)
    if first.occupancy == 1:
        spec = single_string(spec)
    return spec


def _point_spec(axis: str, value: float, template: SystemSpec) -> SystemSpec:
    if axis == "N":
        return _resized(template, int(round(value)))
    if axis == "g":
        return with_intra(template, IntraPotential.inverse_square(value))
    if axis == "a1_over_b":
        return with_intra(template, IntraPotential.delta(scattering_ratio=value))
    return with_intra(template, IntraPotential.delta(scattering_ratio=math.exp(-value)))


def validate_axis(axis: str, template: SystemSpec) -> None:
    """Raise DomainError unless the axis suits the template's intra kind."""
    if axis not in AXES:
        raise DomainError(f"Unknown sweep axis: {axis}. Available axes: {list(AXES)}")
    if axis == "N":
        return
    k = _first_double(template)
    if k is None:
        raise DomainError(f"axis {axis} needs a doubly occupied layer")
    kind = template.layers[k].intra.kind
    wanted = "inverse_square" if axis == "g" else "delta"
    if kind != wanted:
        raise DomainError(f"axis {axis} needs intra kind {wanted}, template has {kind}")
    capabilities = solver_for(template.layers[k].intra, template.dimension).get_capabilities()
    if axis not in capabilities:
        raise DomainError(f"axis {axis} is not available in D={template.dimension}")


def sweep_row(axis: str, value: float, template: SystemSpec, shifts: ShiftModel) -> list[float]:
    """One table row, columns as in SWEEP_COLUMNS."""
    spec = _point_spec(axis, value, template)
    modes = normal_modes(build_interlayer_form(spec))
    budget = _budget(spec, shifts, modes, None, 0, None)
    gaps = excitation_energies(modes, spec.dimension, 1)
    k = _first_double(spec)
    if k is not None:
        omega_k = effective_intra_frequency(spec, k)
        solver = solver_for(spec.layers[k].intra, spec.dimension)
        level = solver.solve(omega_k, layer_reduced_mass(spec, k), 1)[0]
        intra_e, intra_msr = level.energy, level.msr
    else:
        intra_e = intra_msr = float("nan")
    if all(layer.occupancy == 2 for layer in spec.layers):
        separation = separation_energy(spec, shifts)
        delta, delta_shifted = separation.delta_per_layer, separation.delta_shifted_per_layer
    else:
        delta = delta_shifted = float("nan")
    n = spec.n_layers
    logger.info(f"Sweep {axis}={value:g}: total={budget.total:.6f} N={n}")
    return [
        float(value), n, budget.e_string, budget.e_intra, budget.e_cm, budget.v_shift, budget.total,
        budget.total / n, float(np.min(modes.frequencies)), float(np.max(modes.frequencies)),
        gaps[0] if gaps else float("nan"), intra_e, intra_msr, delta, delta_shifted,
    ]


def sweep(axis: str, values: Sequence[float], template: SystemSpec,
          shifts: Optional[ShiftModel] = None, config: Optional[SweepConfig] = None) -> list[list[float]]:
    """Row per point in input order; identical inputs give identical rows."""
    validate_axis(axis, template)
    shifts = shifts or ShiftModel()
    config = config or SweepConfig.from_env()
    return config.map(lambda v: sweep_row(axis, v, template, shifts), list(values))
