"""Brute-force verifiers: full particle-coordinate diagonalization and finite-difference grids."""
import logging
import math
import os
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .assembly import separation_energy, total_ground_energy
from .errors import CapError, DomainError, NumericError
from .intralayer import (
    IntraLevel, delta1d_levels, delta2d_levels, l_effective, minimum_universal_excitation,
    msr_by_hellmann_feynman, msr_by_quadrature,
)
from .model import (
    IntraPotential, LayerSpec, SystemSpec, effective_intra_frequency, default_chain, scaled,
    uniform_coupling,
)
from .modes import build_interlayer_form, excitation_energies, normal_modes

logger = logging.getLogger(__name__)

MAX_COORDINATES = 64
RICHARDSON_LIMIT = 5e-4
MULTISET_TOLERANCE = 1e-8


@dataclass
class GridConfig:
    """Configuration for the finite-difference grid oracle (lengths in b_ω)."""
    step: float = 0.02
    length: float = 12.0

    @classmethod
    def from_env(cls) -> 'GridConfig':
        """Create config from environment variables."""
        return cls(
            step=float(os.getenv('DISJOINT_GRID_STEP', '0.02')),
            length=float(os.getenv('DISJOINT_GRID_LENGTH', '12')),
        )

    def validate(self):
        if not self.step > 0.0:
            raise DomainError(f"grid step must be positive, got {self.step}")
        if self.length < 10.0:
            raise DomainError(f"grid length must be at least 10 b, got {self.length}")


@dataclass(frozen=True)
class FullHessianResult:
    """All particle-coordinate frequencies and the couplings left after the (R, r̃) transform."""
    frequencies: np.ndarray
    coupling_residual: float
    cm_residual: float = 0.0
    relative_residual: float = 0.0


@dataclass(frozen=True)
class GridSolution:
    """Richardson-extrapolated grid energies (ħω units) with per-level error estimates."""
    grid_step: float
    domain_length: float
    lowest_energies: tuple[float, ...]
    error_estimates: tuple[float, ...]
    boundary_kind: Optional[float] = None
    coarse_energies: tuple[float, ...] = ()
    fine_energies: tuple[float, ...] = ()


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    metric: float
    threshold: float
    detail: str = ""


def _particles(spec: SystemSpec) -> list[tuple[int, int, float]]:
    return [(k, p, layer.mass) for k, layer in enumerate(spec.layers) for p in range(layer.occupancy)]


def full_hessian_spectrum(spec: SystemSpec, max_coordinates: int = MAX_COORDINATES) -> FullHessianResult:
    """Diagonalize the stiffness over every particle coordinate, bonds taken one by one."""
    for layer in spec.layers:
        if layer.intra.kind not in ("none", "harmonic"):
            raise DomainError(f"full Hessian needs quadratic intra potentials, got {layer.intra.kind}")
    particles = _particles(spec)
    size = len(particles)
    if size * spec.dimension > max_coordinates:
        raise CapError(f"{size * spec.dimension} coordinates exceed the cap of {max_coordinates}")
    index = {(k, p): j for j, (k, p, _) in enumerate(particles)}
    masses = np.array([m for _, _, m in particles])

    stiffness = np.zeros((size, size))

    def bond(a: int, b: int, k: float):
        stiffness[a, a] += k
        stiffness[b, b] += k
        stiffness[a, b] -= k
        stiffness[b, a] -= k

    for j, (k, _, m) in enumerate(particles):
        stiffness[j, j] += m * spec.layers[k].omega0 ** 2
    for i, k in spec.pairs():
        mu = spec.layers[i].mass * spec.layers[k].mass / (spec.layers[i].mass + spec.layers[k].mass)
        for p, q, w in spec.particle_bonds(i, k):
            bond(index[(i, p)], index[(k, q)], mu * w)
    for k, layer in enumerate(spec.layers):
        if layer.occupancy == 2 and layer.intra.kind == "harmonic":
            bond(index[(k, 0)], index[(k, 1)], 0.5 * layer.mass * layer.intra.omega ** 2)

    weighted = stiffness / np.sqrt(np.outer(masses, masses))
    eigenvalues = np.linalg.eigh(weighted)[0]
    frequencies = np.sqrt(np.clip(eigenvalues, 0.0, None))

    # x_p = R_k ± r̃_k / 2 for the two particles of a double layer
    n = spec.n_layers
    doubles = [k for k, layer in enumerate(spec.layers) if layer.occupancy == 2]
    transform = np.zeros((size, n + len(doubles)))
    new_masses = np.zeros(n + len(doubles))
    for k, layer in enumerate(spec.layers):
        new_masses[k] = layer.total_mass
    for slot, k in enumerate(doubles):
        new_masses[n + slot] = spec.layers[k].mass / 2.0
    for j, (k, p, _) in enumerate(particles):
        transform[j, k] = 1.0
        if spec.layers[k].occupancy == 2:
            transform[j, n + doubles.index(k)] = 0.5 if p == 0 else -0.5
    moved = transform.T @ stiffness @ transform
    moved = moved / np.sqrt(np.outer(new_masses, new_masses))
    cross = moved[n:, :n]
    relative = moved[n:, n:] - np.diag(np.diag(moved[n:, n:]))
    cm_residual = float(np.linalg.norm(cross))
    relative_residual = float(np.linalg.norm(relative))
    return FullHessianResult(
        frequencies=np.sort(np.repeat(frequencies, spec.dimension)),
        coupling_residual=math.sqrt(2.0 * cm_residual ** 2 + relative_residual ** 2),
        cm_residual=cm_residual,
        relative_residual=relative_residual,
    )


def decoupled_frequencies(spec: SystemSpec) -> np.ndarray:
    """Layer-center modes plus one relative frequency √(ω_k² + Ω_k²) per double layer, each D-fold."""
    modes = normal_modes(build_interlayer_form(spec, check=False))
    values = list(modes.frequencies)
    for k, layer in enumerate(spec.layers):
        if layer.occupancy == 2:
            omega_k = effective_intra_frequency(spec, k)
            extra = layer.intra.omega if layer.intra.kind == "harmonic" else 0.0
            values.append(math.sqrt(omega_k ** 2 + extra ** 2))
    return np.sort(np.repeat(np.array(values), spec.dimension))


def multiset_distance(first: np.ndarray, second: np.ndarray) -> float:
    if len(first) != len(second):
        return math.inf
    return float(np.max(np.abs(np.sort(first) - np.sort(second)))) if len(first) else 0.0


def _richardson(build: Callable[[float], tuple[np.ndarray, np.ndarray]], levels: int,
                grid: GridConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    energies = []
    for h in (grid.step, grid.step / 2.0):
        diagonal, off = build(h)
        energies.append(eigh_tridiagonal(diagonal, off, eigvals_only=True,
                                         select="i", select_range=(0, levels - 1)))
    coarse, fine = energies
    extrapolated = (4.0 * fine - coarse) / 3.0
    errors = np.abs(fine - coarse) / 3.0
    return extrapolated, errors, coarse, fine


def grid_delta1d(a1_over_b: float, levels: int = 2, grid: Optional[GridConfig] = None) -> GridSolution:
    """Even-sector energies of the trapped 1D delta problem on (0, L] with ψ′(0) = ψ(0)/a₁."""
    if not a1_over_b > 0.0:
        raise DomainError(f"a1/b must be positive, got {a1_over_b}")
    grid = grid or GridConfig.from_env()
    grid.validate()

    def build(h: float) -> tuple[np.ndarray, np.ndarray]:
        points = int(round(grid.length / h))
        x = h * np.arange(points)
        diagonal = 1.0 / h ** 2 + 0.5 * x * x
        diagonal[0] = 1.0 / h ** 2 + 1.0 / (a1_over_b * h)
        off = np.full(points - 1, -0.5 / h ** 2)
        off[0] = -1.0 / (math.sqrt(2.0) * h ** 2)
        return diagonal, off

    energies, errors, coarse, fine = _richardson(build, levels, grid)
    _check_resolution(errors)
    return GridSolution(
        grid_step=grid.step, domain_length=grid.length,
        lowest_energies=tuple(float(e) for e in energies),
        error_estimates=tuple(float(e) for e in errors),
        boundary_kind=a1_over_b,
        coarse_energies=tuple(float(e) for e in coarse),
        fine_energies=tuple(float(e) for e in fine),
    )


def grid_inverse_square(g: float, dimension: int = 1, angular: int = 0, levels: int = 3,
                        grid: Optional[GridConfig] = None) -> GridSolution:
    """Radial energies of g/x² (plus the centrifugal term) in the trap, Dirichlet at the origin."""
    l_eff = l_effective(g, dimension, angular)
    barrier = l_eff * (l_eff + 1.0)
    grid = grid or GridConfig.from_env()
    grid.validate()

    def build(h: float) -> tuple[np.ndarray, np.ndarray]:
        points = int(round(grid.length / h))
        x = h * np.arange(1, points)
        diagonal = 1.0 / h ** 2 + 0.5 * barrier / (x * x) + 0.5 * x * x
        off = np.full(len(x) - 1, -0.5 / h ** 2)
        return diagonal, off

    energies, errors, coarse, fine = _richardson(build, levels, grid)
    _check_resolution(errors)
    return GridSolution(
        grid_step=grid.step, domain_length=grid.length,
        lowest_energies=tuple(float(e) for e in energies),
        error_estimates=tuple(float(e) for e in errors),
        coarse_energies=tuple(float(e) for e in coarse),
        fine_energies=tuple(float(e) for e in fine),
    )


def convergence_order_ratio(solution: GridSolution, exact: Sequence[float]) -> np.ndarray:
    """error(h)/error(h/2) per level; about 4 for the second-order stencils."""
    coarse = np.abs(np.asarray(solution.coarse_energies) - np.asarray(exact))
    fine = np.abs(np.asarray(solution.fine_energies) - np.asarray(exact))
    if np.any(fine == 0.0):
        raise NumericError("fine-grid energy hits the exact value, convergence order is undefined")
    return coarse / fine


def _check_resolution(errors: np.ndarray):
    worst = float(np.max(errors))
    if worst > RICHARDSON_LIMIT:
        raise NumericError(f"grid too coarse: Richardson error estimate {worst:.3e} exceeds {RICHARDSON_LIMIT}")


def _random_layers(rng: np.random.Generator, n: int) -> list[LayerSpec]:
    layers = []
    for _ in range(n):
        occupancy = int(rng.integers(1, 3))
        intra = IntraPotential.none()
        if occupancy == 2 and rng.random() < 0.5:
            intra = IntraPotential.harmonic(float(rng.uniform(0.0, 2.0)))
        layers.append(LayerSpec(occupancy=occupancy, mass=float(rng.uniform(0.5, 2.0)),
                                omega0=float(rng.uniform(0.5, 2.0)), intra=intra))
    return layers


def random_decoupled_spec(rng: np.random.Generator, max_layers: int = 4) -> SystemSpec:
    """Mixed occupancy, random masses per layer, one frequency per coupled pair."""
    n = int(rng.integers(1, max_layers + 1))
    layers = _random_layers(rng, n)
    omega2 = {}
    for i in range(n):
        for k in range(i + 1, n):
            if rng.random() < 0.75:
                omega2[(i, k)] = float(rng.uniform(0.1, 9.0))
    return SystemSpec.build(int(rng.integers(1, 4)), layers, omega2)


def random_violating_spec(rng: np.random.Generator, max_layers: int = 4) -> SystemSpec:
    """Like random_decoupled_spec but the first two layers are doubles with bonds breaking the condition."""
    n = int(rng.integers(2, max_layers + 1))
    layers = _random_layers(rng, n)
    for k in (0, 1):
        layers[k] = LayerSpec(occupancy=2, mass=layers[k].mass, omega0=layers[k].omega0, intra=layers[k].intra)
    omega2 = {}
    for i in range(n):
        for k in range(i + 1, n):
            if (i, k) != (0, 1) and rng.random() < 0.75:
                omega2[(i, k)] = float(rng.uniform(0.1, 9.0))
    base = float(rng.uniform(0.5, 4.0))
    gap = float(rng.uniform(0.5, 2.0))
    bonds = {(0, 1): (base, base + gap, base + gap, base + gap)}
    return SystemSpec.build(int(rng.integers(1, 4)), layers, omega2, bonds=bonds)


def _check(name: str, threshold: float, run: Callable[[], tuple[bool, float, str]]) -> CheckResult:
    try:
        passed, metric, detail = run()
    except Exception as e:
        logger.error(f"Check {name} raised: {e}")
        return CheckResult(name=name, passed=False, metric=math.nan, threshold=threshold, detail=str(e))
    logger.info(f"Check {name}: {'pass' if passed else 'FAIL'} metric={metric:.6e}")
    return CheckResult(name=name, passed=passed, metric=metric, threshold=threshold, detail=detail)


def verify_suite(seed: int, n_random: int = 200, grid: Optional[GridConfig] = None) -> list[CheckResult]:
    """Run every oracle cross-check with a seeded generator."""
    rng = np.random.default_rng(seed)
    grid = grid or GridConfig.from_env()

    def uniform_degeneracy():
        worst = 0.0
        for n in range(3, 9):
            freqs = normal_modes(build_interlayer_form(uniform_coupling(n, 1.0))).frequencies
            expected = np.array([1.0] + [math.sqrt(1.0 + n)] * (n - 1))
            worst = max(worst, float(np.max(np.abs(freqs - expected))))
        return worst <= 1e-10, worst, "N=3..8, omega_r=1"

    def chain_extremes():
        modes = normal_modes(build_interlayer_form(default_chain(30)))
        largest = float(modes.frequencies[-1])
        lowest = excitation_energies(modes, 1, 1)[0]
        metric = max(abs(largest - 6.083) / 0.01, abs(lowest - 1.0) / 0.05)
        return metric <= 1.0, metric, f"largest={largest:.6f} lowest_excitation={lowest:.6f}"

    def decoupling_theorem():
        worst = 0.0
        for _ in range(n_random):
            spec = random_decoupled_spec(rng)
            worst = max(worst, multiset_distance(full_hessian_spectrum(spec).frequencies,
                                                 decoupled_frequencies(spec)))
        return worst <= MULTISET_TOLERANCE, worst, f"{n_random} random specs"

    def violation_detection():
        smallest = math.inf
        for _ in range(max(n_random // 4, 1)):
            spec = random_violating_spec(rng)
            result = full_hessian_spectrum(spec)
            distance = multiset_distance(result.frequencies, decoupled_frequencies(spec))
            smallest = min(smallest, result.coupling_residual, distance)
        return smallest > MULTISET_TOLERANCE, smallest, "smallest residual or distance"

    def delta_vs_grid():
        worst = 0.0
        for a in (0.1, 0.5, 1.0, 2.0, 10.0):
            even = [lv.energy for lv in delta1d_levels(a, 2) if lv.kind == "delta1d_even"]
            solution = grid_delta1d(a, 2, grid)
            worst = max(worst, max(abs(x - y) for x, y in zip(even, solution.lowest_energies)))
        return worst < 1e-4, worst, "a1/b in {0.1, 0.5, 1, 2, 10}"

    def convergence_order():
        ratios = []
        for a in (0.3, 1.0, 3.0):
            exact = [delta1d_levels(a, 1)[0].energy]
            ratios.extend(convergence_order_ratio(grid_delta1d(a, 1, grid), exact))
        metric = max(abs(ratio - 4.0) / 0.5 for ratio in ratios)
        return metric <= 1.0, metric, "error(h)/error(h/2) in [3.5, 4.5], a1/b in {0.3, 1, 3}"

    def limit_laws():
        strong = delta1d_levels(1e6, 1)[0].quantum_number
        weak = delta1d_levels(1e-6, 1)[0].quantum_number
        flat = delta2d_levels(20.0, 1)[0].quantum_number
        far = delta2d_levels(1000.0, 1)[0].quantum_number
        metric = max(strong / 1e-5, abs(weak - 0.5) / 1e-4, flat / 0.03, far / 1e-3)
        return metric < 1.0, metric, f"nu0: {strong:.3e}, {weak:.6f}, {flat:.5f}, {far:.3e}"

    def msr_routes():
        worst = 0.0
        for a in np.logspace(-1, 1, 20):
            level = delta1d_levels(float(a), 1)[0]
            worst = max(worst, _route_gap(level))
        for ln_ratio in np.linspace(-1.0, 3.0, 20):
            level = delta2d_levels(float(ln_ratio), 1)[0]
            worst = max(worst, _route_gap(level))
        return worst < 1e-4, worst, "quadrature vs Hellmann-Feynman, 20 strengths per dimension"

    def intra_excitation():
        _, minimum = minimum_universal_excitation()
        outer, interior = math.sqrt(10.0) * minimum, math.sqrt(19.0) * minimum
        metric = max(abs(outer - 5.90), abs(interior - 8.14))
        return metric <= 0.15, metric, f"outer={outer:.4f} interior={interior:.4f}"

    def saturation():
        worst = 0.0
        potentials = [IntraPotential.inverse_square(g) for g in (0.0, 1.0, 2.0, 3.0)]
        potentials += [IntraPotential.delta(scattering_ratio=a) for a in (0.1, 1.0, 10.0)]
        for intra in potentials:
            short = separation_energy(default_chain(10, 1, intra)).delta_per_layer
            long = separation_energy(default_chain(60, 1, intra)).delta_per_layer
            worst = max(worst, abs(short - long) / abs(long))
        return worst <= 0.1, worst, "N=10 vs N=60"

    def scale_covariance():
        spec = default_chain(6, 1, IntraPotential.inverse_square(1.0))
        base = total_ground_energy(spec).total
        worst = 0.0
        for factor in (0.5, 2.0, 7.0):
            value = total_ground_energy(scaled(spec, factor)).total
            worst = max(worst, abs(value - factor * base) / abs(factor * base))
        return worst <= 1e-10, worst, "lambda in {0.5, 2, 7}"

    checks = [
        ("uniform_degeneracy", 1e-10, uniform_degeneracy),
        ("chain_extremes", 1.0, chain_extremes),
        ("decoupling_theorem", MULTISET_TOLERANCE, decoupling_theorem),
        ("violation_detection", MULTISET_TOLERANCE, violation_detection),
        ("delta1d_vs_grid", 1e-4, delta_vs_grid),
        ("grid_convergence_order", 1.0, convergence_order),
        ("limit_laws", 1.0, limit_laws),
        ("msr_dual_route", 1e-4, msr_routes),
        ("intra_excitation", 0.15, intra_excitation),
        ("separation_saturation", 0.1, saturation),
        ("scale_covariance", 1e-10, scale_covariance),
    ]
    return [_check(name, threshold, run) for name, threshold, run in checks]


def _route_gap(level: IntraLevel) -> float:
    return abs(msr_by_hellmann_feynman(level) - msr_by_quadrature(level))
