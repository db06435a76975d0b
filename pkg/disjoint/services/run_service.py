"""Service layer between the CLI commands and the core solvers."""
import logging
import math
from typing import Callable, Optional, TypeVar

import numpy as np

from disjoint.core.assembly import (
    SWEEP_COLUMNS, SweepConfig, critical_strength, ground_energy_per_layer, separation_curve, sweep,
)
from disjoint.core.errors import DisjointError, DomainError
from disjoint.core.intralayer import IntraLevel, delta1d_levels, delta2d_levels, delta_msr
from disjoint.core.model import (
    DEFAULT_OMEGA12, DecouplingReport, IntraPotential, SystemSpec, cm_frequency,
    effective_intra_frequency, layer_reduced_mass, oscillator_length, pair_residuals,
    validate_decoupling,
)
from disjoint.core.modes import (
    build_interlayer_form, cm_levels, excitation_energies, normal_modes, string_spectrum,
)
from disjoint.core.oracle import GridConfig, verify_suite
from disjoint.core.solvers import solver_for
from disjoint.dto.config_dto import ParsedConfig
from disjoint.dto.table_dto import Table

logger = logging.getLogger(__name__)

T = TypeVar("T")

RADIUS_COLUMNS = [
    "strength", "nu0", "msr_ground", "msr_minus_Dminus1", "nu1", "msr_excited_even",
    "msr_excited_odd", "excitation",
]


def _omega12(spec: SystemSpec) -> float:
    return math.sqrt(spec.interlayer_omega2[0][1]) if spec.n_layers > 1 else DEFAULT_OMEGA12


def _family_intra(template: IntraPotential, dimension: int, strength: float) -> IntraPotential:
    """Intra potential of the template's kind at another strength."""
    if template.kind == "inverse_square":
        return IntraPotential.inverse_square(strength)
    if template.kind == "delta":
        ratio = strength if dimension == 1 else math.exp(-strength)
        return IntraPotential.delta(scattering_ratio=ratio)
    if template.kind == "harmonic":
        return IntraPotential.harmonic(strength)
    return template


def _template_strength(template: IntraPotential, dimension: int, spec: SystemSpec) -> float:
    if template.kind == "delta":
        ratio = template.a_over_b(oscillator_length(spec, 0)) if spec.layers[0].occupancy == 2 \
            else template.strength
        return ratio if dimension == 1 else -math.log(ratio)
    return template.strength


def _quanta_label(quanta: tuple[tuple[int, ...], ...]) -> str:
    return "|".join(" ".join(str(n) for n in state) for state in quanta)


class RunService:
    """Service layer for the batch subcommands; every method returns output tables."""

    def __init__(self, sweep_config: Optional[SweepConfig] = None, grid_config: Optional[GridConfig] = None):
        self.sweep_config = sweep_config or SweepConfig.from_env()
        self.grid_config = grid_config or GridConfig.from_env()
        logger.info(f"RunService initialized (threads={self.sweep_config.threads})")

    def _guarded(self, action: str, func: Callable[[], T]) -> T:
        try:
            logger.info(f"Starting {action}")
            result = func()
            logger.info(f"Finished {action}")
            return result
        except DisjointError as e:
            logger.error(f"{action} failed: {e}")
            raise
        except Exception as e:
            logger.error(f"{action} failed: {e}")
            raise RuntimeError(f"Failed to {action}: {str(e)}") from e

    def check(self, parsed: ParsedConfig) -> tuple[Table, DecouplingReport]:
        """Decoupling residuals per layer pair plus the overall report."""
        def run():
            spec = parsed.spec
            report = validate_decoupling(spec)
            rows = []
            for i, k in spec.pairs():
                relative, cm = pair_residuals(spec, i, k)
                rows.append([i + 1, k + 1, float(spec.interlayer_omega2[i][k]), relative, cm,
                             (i, k) not in report.violating_pairs])
            logger.info(f"Decoupling satisfied={report.satisfied} exact={report.exact} "
                        f"worst={report.worst_violation:.3e}")
            table = Table(columns=["layer_i", "layer_k", "omega2", "relative_residual", "cm_residual",
                                   "satisfied"], rows=rows)
            return table, report
        return self._guarded("check decoupling", run)

    def modes(self, parsed: ParsedConfig) -> list[Table]:
        """Normal-mode frequencies and the effective intra frequency of every double layer."""
        def run():
            spec = parsed.spec
            modes = normal_modes(build_interlayer_form(spec))
            uniform = np.sqrt(modes.masses) / math.sqrt(float(modes.masses.sum()))
            overlaps = np.abs(modes.eigenvectors.T @ uniform)
            rows = [[j, float(w), float(overlaps[j]), j == modes.cm_like_index]
                    for j, w in enumerate(modes.frequencies)]
            main = Table(columns=["mode", "frequency", "cm_overlap", "is_cm"], rows=rows)
            intra_rows = []
            for k, layer in enumerate(spec.layers):
                if layer.occupancy == 2:
                    intra_rows.append([k + 1, effective_intra_frequency(spec, k),
                                       layer_reduced_mass(spec, k), oscillator_length(spec, k)])
            intra = Table(name="intra_frequency",
                          columns=["layer", "omega_k", "reduced_mass", "b_omega"], rows=intra_rows)
            return [main, intra]
        return self._guarded("compute normal modes", run)

    def spectrum(self, parsed: ParsedConfig) -> list[Table]:
        """String levels below the cap, lowest excitations, center-of-mass tower and E0/N per chain length."""
        def run():
            spec, settings = parsed.spec, parsed.run
            modes = normal_modes(build_interlayer_form(spec))
            freqs = modes.string_frequencies
            zero_point = 0.5 * spec.dimension * float(np.sum(freqs))
            width = 2.0 * float(np.min(freqs)) if len(freqs) else 0.0
            cap = settings.energy_cap if settings.energy_cap is not None else zero_point + width
            levels = string_spectrum(modes, spec.dimension, cap)
            rows = [[j, level.energy, level.energy - levels.zero_point, level.degeneracy, level.merged,
                     _quanta_label(level.quanta)] for j, level in enumerate(levels)]
            main = Table(columns=["level", "energy", "excitation", "degeneracy", "merged", "quanta"], rows=rows)

            excitations = excitation_energies(modes, spec.dimension, settings.count)
            gaps = Table(name="excitations", columns=["index", "excitation"],
                         rows=[[j + 1, e] for j, e in enumerate(excitations)])

            omega_cm = cm_frequency(spec)
            tower = cm_levels(omega_cm, spec.dimension, 0.5 * spec.dimension * omega_cm + (cap - zero_point))
            cm = Table(name="cm", columns=["level", "energy", "degeneracy"],
                       rows=[[j, level.energy, level.degeneracy] for j, level in enumerate(tower)])

            tables = [main, gaps, cm]
            if settings.n_values:
                first = spec.layers[0]
                intra = first.intra if first.occupancy == 2 else IntraPotential.none()
                per_layer = ground_energy_per_layer(sorted(settings.n_values), spec.dimension, intra,
                                                    parsed.shifts, _omega12(spec))
                tables.append(Table(name="ground_per_layer", columns=["n_layers", "energy_per_layer"],
                                    rows=[[n, e] for n, e in per_layer]))
            return tables
        return self._guarded("compute string spectrum", run)

    def _radius_rows(self, dimension: int, strengths: list[float]) -> list[list]:
        rows = []
        for strength in sorted(strengths):
            if dimension == 1:
                levels = delta1d_levels(strength, 2)
                even = [level for level in levels if level.kind == "delta1d_even"]
                odd = [level for level in levels if level.kind == "delta1d_odd"]
                excited_odd = odd[0].msr
            else:
                even = delta2d_levels(strength, 2)
                excited_odd = float("nan")
            ground = delta_msr(even[0])
            rows.append([
                strength, even[0].quantum_number, ground, ground - (dimension - 1),
                even[1].quantum_number, delta_msr(even[1]), excited_odd,
                2.0 * (even[1].quantum_number - even[0].quantum_number),
            ])
        return rows

    def intra(self, parsed: ParsedConfig) -> list[Table]:
        """Intra levels of every double layer, plus the radius table for contact interactions."""
        def run():
            spec, settings = parsed.spec, parsed.run
            rows = []
            for k, layer in enumerate(spec.layers):
                if layer.occupancy != 2:
                    continue
                omega_k = effective_intra_frequency(spec, k)
                solver = solver_for(layer.intra, spec.dimension)
                levels: list[IntraLevel] = solver.solve(omega_k, layer_reduced_mass(spec, k), settings.levels)
                for j, level in enumerate(levels):
                    msr = delta_msr(level) if level.kind.startswith("delta") else level.msr
                    rows.append([k + 1, level.kind, j, level.quantum_number, level.energy,
                                 level.absolute_energy, msr, omega_k, level.degeneracy, level.symmetry])
            main = Table(columns=["layer", "kind", "index", "quantum_number", "energy_k", "energy", "msr",
                                  "omega_k", "degeneracy", "symmetry"], rows=rows)
            tables = [main]
            kinds = {layer.intra.kind for layer in spec.layers if layer.occupancy == 2}
            if "delta" in kinds:
                if spec.dimension not in (1, 2):
                    raise DomainError(f"delta interactions are defined for D=1 and D=2 only, got D={spec.dimension}")
                strengths = settings.strengths or (
                    [float(v) for v in np.logspace(-2.0, 2.0, 9)] if spec.dimension == 1
                    else [float(v) for v in np.linspace(-2.0, 4.0, 7)]
                )
                tables.append(Table(name="radius", columns=RADIUS_COLUMNS,
                                    rows=self._radius_rows(spec.dimension, strengths)))
            return tables
        return self._guarded("solve intra-layer levels", run)

    def separation(self, parsed: ParsedConfig) -> list[Table]:
        """Separation energy per layer of nearest-neighbor chains, one curve per strength."""
        def run():
            spec, settings, shifts = parsed.spec, parsed.run, parsed.shifts
            template = spec.layers[0].intra
            dimension = spec.dimension
            strengths = settings.strengths or [_template_strength(template, dimension, spec)]
            rows = []
            for strength in sorted(strengths):
                intra = _family_intra(template, dimension, strength)
                curve = separation_curve(settings.n_max, dimension, intra, shifts, settings.n_min,
                                         _omega12(spec), spec.layers[0].omega0, self.sweep_config)
                rows.extend([strength, point.n_layers, point.delta_per_layer, point.delta_shifted_per_layer]
                            for point in curve.points)
            main = Table(columns=["strength", "n_layers", "delta_per_layer", "delta_shifted_per_layer"],
                         rows=rows)
            tables = [main]
            if shifts.default > 0.0 and template.kind in ("inverse_square", "delta"):
                try:
                    value = critical_strength(settings.n_max, dimension, template.kind, shifts,
                                              omega12=_omega12(spec))
                except DomainError as e:
                    logger.warning(f"No stability threshold at N={settings.n_max}: {e}")
                    value = float("nan")
                tables.append(Table(name="threshold", columns=["n_layers", "e", "critical_strength"],
                                    rows=[[settings.n_max, shifts.default, value]]))
            return tables
        return self._guarded("compute separation energies", run)

    def sweep(self, parsed: ParsedConfig) -> Table:
        """Energy budget rows along one axis, in input order."""
        def run():
            settings = parsed.run
            if settings.axis is None:
                raise DomainError("sweep needs axis, start and stop in [run]")
            values = [float(v) for v in np.linspace(settings.start, settings.stop, settings.num)]
            if settings.axis == "N":
                values = [float(int(round(v))) for v in values]
            rows = sweep(settings.axis, values, parsed.spec, parsed.shifts, self.sweep_config)
            return Table(columns=list(SWEEP_COLUMNS), rows=rows)
        return self._guarded("run sweep", run)

    def verify(self, seed: int, n_random: int = 200) -> tuple[Table, bool]:
        """Run the oracle suite; the flag is True only when every check passes."""
        def run():
            results = verify_suite(seed, n_random, self.grid_config)
            rows = [[r.name, r.passed, float(r.metric), float(r.threshold), r.detail] for r in results]
            table = Table(columns=["check", "passed", "metric", "threshold", "detail"], rows=rows)
            return table, all(r.passed for r in results)
        return self._guarded("run verification suite", run)
