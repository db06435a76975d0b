"""Inter-layer normal modes and the string spectrum built from them."""
import heapq
import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import CapError, DecouplingError, NumericError, UnstableFormError
from .model import SystemSpec, validate_decoupling

logger = logging.getLogger(__name__)

JACOBI_THRESHOLD = 1e-14
JACOBI_MAX_SWEEPS = 100
NEGATIVE_EIGENVALUE_TOLERANCE = 1e-10
DEGENERACY_TOLERANCE = 1e-8
CM_OVERLAP_TOLERANCE = 1e-8
LEVEL_MERGE_TOLERANCE = 1e-9
MAX_STATES = 200_000


@dataclass(frozen=True)
class QuadraticForm:
    """½ Rᵀ K R over layer center-of-mass coordinates R_k with layer masses M_k."""
    masses: np.ndarray
    stiffness: np.ndarray

    def mass_weighted(self) -> np.ndarray:
        scale = np.sqrt(np.outer(self.masses, self.masses))
        return self.stiffness / scale


@dataclass(frozen=True)
class NormalModeSet:
    """Sorted mode frequencies with mass-weighted orthonormal eigenvectors as columns.

    ``cm_index`` is set only when a mode is parallel to the mass-weighted uniform
    vector; ``cm_like_index`` always points at the mode with the largest overlap.
    """
    frequencies: np.ndarray
    eigenvectors: np.ndarray
    masses: np.ndarray
    cm_index: Optional[int]
    cm_like_index: int
    cm_overlap: float

    @property
    def string_frequencies(self) -> np.ndarray:
        return np.delete(self.frequencies, self.cm_like_index)

    @property
    def cm_mode_frequency(self) -> float:
        return float(self.frequencies[self.cm_like_index])


@dataclass(frozen=True)
class Level:
    """One (possibly merged) level: energy, exact degeneracy and the multi-indices it holds."""
    energy: float
    degeneracy: int
    quanta: tuple[tuple[int, ...], ...]
    merged: bool = False


@dataclass(frozen=True)
class LevelList:
    levels: tuple[Level, ...]
    zero_point: float

    def __iter__(self) -> Iterator[Level]:
        return iter(self.levels)

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, index: int) -> Level:
        return self.levels[index]

    @property
    def energies(self) -> list[float]:
        return [level.energy for level in self.levels]


def jacobi_eigh(matrix: np.ndarray, threshold: float = JACOBI_THRESHOLD) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigen-decomposition of a real symmetric matrix.

    Sweeps run over (p, q) in row-major order until the off-diagonal Frobenius
    norm falls below ``threshold`` times the matrix norm. Returns unsorted
    eigenvalues and the eigenvectors as columns.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.identity(n)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for sweep in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(max(float(np.sum(a * a) - np.sum(np.diag(a) ** 2)), 0.0))
        if off <= threshold * scale:
            logger.debug(f"Jacobi converged after {sweep} sweeps (n={n})")
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300 or abs(apq) < 1e-3 * threshold * scale / n:
                    continue
                app, aqq = a[p, p], a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    raise NumericError(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={n})")


def _fix_sign(vector: np.ndarray) -> np.ndarray:
    for value in vector:
        if abs(value) > 1e-8:
            return vector if value > 0 else -vector
    return vector


def _canonical_basis(subspace: np.ndarray, uniform: np.ndarray) -> np.ndarray:
    """Gram-Schmidt basis of a degenerate subspace, seeded by the uniform vector then e_0, e_1, …"""
    n, size = subspace.shape
    projector = subspace @ subspace.T
    candidates = []
    if np.dot(projector @ uniform, uniform) >= 1.0 - CM_OVERLAP_TOLERANCE:
        candidates.append(uniform)
    candidates.extend(np.identity(n))
    chosen: list[np.ndarray] = []
    for candidate in candidates:
        vec = projector @ candidate
        for basis in chosen:
            vec = vec - np.dot(basis, vec) * basis
        norm = np.linalg.norm(vec)
        if norm > 1e-6:
            chosen.append(vec / norm)
        if len(chosen) == size:
            break
    return np.column_stack(chosen)


def build_interlayer_form(spec: SystemSpec, check: bool = True) -> QuadraticForm:
    """Stiffness over layer centers: traps on the diagonal, c_ik (R_i − R_k)² per pair.

    c_ik = ½ Σ_{p∈i, q∈k} μ_pq ω_pq² over the particle-level bonds.
    """
    if check:
        report = validate_decoupling(spec)
        if not report.satisfied:
            raise DecouplingError(
                f"decoupling conditions violated by {report.worst_violation:.3e} "
                f"on pairs {[(i + 1, k + 1) for i, k in report.violating_pairs]}"
            )
    n = spec.n_layers
    masses = spec.total_masses
    stiffness = np.zeros((n, n))
    for k, layer in enumerate(spec.layers):
        stiffness[k, k] += masses[k] * layer.omega0 ** 2
    for i, k in spec.pairs():
        m_i, m_k = spec.layers[i].mass, spec.layers[k].mass
        mu = m_i * m_k / (m_i + m_k)
        coefficient = 0.5 * mu * sum(w for _, _, w in spec.particle_bonds(i, k))
        stiffness[i, i] += 2.0 * coefficient
        stiffness[k, k] += 2.0 * coefficient
        stiffness[i, k] -= 2.0 * coefficient
        stiffness[k, i] -= 2.0 * coefficient
    return QuadraticForm(masses=masses, stiffness=stiffness)


def normal_modes(form: QuadraticForm) -> NormalModeSet:
    """Diagonalize the mass-weighted stiffness; identify the center-of-mass mode by overlap."""
    weighted = form.mass_weighted()
    eigenvalues, vectors = jacobi_eigh(weighted)
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]

    if eigenvalues[0] < -NEGATIVE_EIGENVALUE_TOLERANCE:
        raise UnstableFormError(f"inter-layer form has a negative eigenvalue {eigenvalues[0]:.6e}")
    negatives = eigenvalues < 0.0
    if np.any(negatives):
        logger.warning(f"Clamped {int(negatives.sum())} eigenvalue(s) in [-1e-10, 0) to zero")
        eigenvalues = np.where(negatives, 0.0, eigenvalues)

    uniform = np.sqrt(form.masses) / math.sqrt(float(form.masses.sum()))
    n = len(eigenvalues)
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and eigenvalues[stop] - eigenvalues[start] <= DEGENERACY_TOLERANCE * scale:
            stop += 1
        if stop - start > 1:
            vectors[:, start:stop] = _canonical_basis(vectors[:, start:stop], uniform)
        start = stop
    for j in range(n):
        vectors[:, j] = _fix_sign(vectors[:, j])

    overlaps = np.abs(vectors.T @ uniform)
    cm_like = int(np.argmax(overlaps))
    cm_index = cm_like if overlaps[cm_like] >= 1.0 - CM_OVERLAP_TOLERANCE else None
    if cm_index is None:
        logger.warning(
            f"No exact center-of-mass mode (best overlap {overlaps[cm_like]:.6f}); "
            f"mode {cm_like} is booked as center of mass"
        )
    return NormalModeSet(
        frequencies=np.sqrt(eigenvalues),
        eigenvectors=vectors,
        masses=np.array(form.masses, dtype=float),
        cm_index=cm_index,
        cm_like_index=cm_like,
        cm_overlap=float(overlaps[cm_like]),
    )


def degeneracy(quanta: int, dimension: int) -> int:
    """States of an isotropic D-dimensional oscillator with ``quanta`` total quanta."""
    return math.comb(quanta + dimension - 1, dimension - 1)


def _state_degeneracy(state: tuple[int, ...], dimension: int) -> int:
    total = 1
    for quanta in state:
        total *= degeneracy(quanta, dimension)
    return total


def _merge_states(states: list[tuple[float, tuple[int, ...]]], dimension: int) -> list[Level]:
    states.sort(key=lambda item: (item[0], item[1]))
    levels: list[Level] = []
    group: list[tuple[float, tuple[int, ...]]] = []

    def flush():
        if not group:
            return
        spread = group[-1][0] - group[0][0]
        if spread > 1e-12:
            logger.warning(f"Merged {len(group)} near-degenerate levels spread over {spread:.3e}")
        levels.append(Level(
            energy=group[0][0],
            degeneracy=sum(_state_degeneracy(state, dimension) for _, state in group),
            quanta=tuple(state for _, state in group),
            merged=len(group) > 1,
        ))

    for energy, state in states:
        if group and energy - group[0][0] > LEVEL_MERGE_TOLERANCE:
            flush()
            group = []
        group.append((energy, state))
    flush()
    return levels


def string_spectrum(modes: NormalModeSet, dimension: int, energy_cap: float,
                    max_states: int = MAX_STATES) -> LevelList:
    """E_S = Σ ω′_k (N_k + D/2) over the non-center-of-mass modes, every level up to ``energy_cap``."""
    freqs = [float(w) for w in modes.string_frequencies]
    zero_point = 0.5 * dimension * sum(freqs)
    if energy_cap < zero_point - 1e-12:
        raise CapError(f"energy cap {energy_cap} is below the string zero-point energy {zero_point:.6f}")
    if any(w <= 1e-12 for w in freqs) and energy_cap > zero_point:
        raise CapError("a zero-frequency string mode makes the level count unbounded")

    start = (0,) * len(freqs)
    seen = {start}
    queue = deque([start])
    states = []
    while queue:
        state = queue.popleft()
        energy = zero_point + sum(n * w for n, w in zip(state, freqs))
        states.append((energy, state))
        if len(states) > max_states:
            raise CapError(f"more than {max_states} string states below cap {energy_cap}")
        for j in range(len(freqs)):
            nxt = state[:j] + (state[j] + 1,) + state[j + 1:]
            if nxt in seen:
                continue
            if energy + freqs[j] <= energy_cap + 1e-12:
                seen.add(nxt)
                queue.append(nxt)
    return LevelList(levels=tuple(_merge_states(states, dimension)), zero_point=zero_point)


def excitation_energies(modes: NormalModeSet, dimension: int, count: int) -> list[float]:
    """Lowest ``count`` distinct string excitation energies E_S − E_0, center of mass excluded."""
    freqs = [float(w) for w in modes.string_frequencies]
    if not freqs or count <= 0:
        return []
    start = (0,) * len(freqs)
    heap = [(0.0, start)]
    seen = {start}
    distinct: list[float] = []
    while heap and len(distinct) < count + 1:
        energy, state = heapq.heappop(heap)
        if not distinct or energy - distinct[-1] > LEVEL_MERGE_TOLERANCE:
            distinct.append(energy)
        for j in range(len(freqs)):
            nxt = state[:j] + (state[j] + 1,) + state[j + 1:]
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (energy + freqs[j], nxt))
    return distinct[1:count + 1]


def cm_levels(omega_cm: float, dimension: int, energy_cap: float) -> LevelList:
    """Center-of-mass tower ω_CM (n + D/2) with degeneracy C(n + D − 1, D − 1)."""
    zero_point = 0.5 * dimension * omega_cm
    if energy_cap < zero_point - 1e-12:
        raise CapError(f"energy cap {energy_cap} is below the center-of-mass zero point {zero_point:.6f}")
    if omega_cm <= 0.0:
        return LevelList(levels=(Level(energy=0.0, degeneracy=1, quanta=((0,),)),), zero_point=0.0)
    levels = []
    n = 0
    while zero_point + n * omega_cm <= energy_cap + 1e-12:
        levels.append(Level(energy=zero_point + n * omega_cm, degeneracy=degeneracy(n, dimension),
                            quanta=((n,),)))
        n += 1
    return LevelList(levels=tuple(levels), zero_point=zero_point)
