"""Analytic intra-layer two-body problems: inverse-square and contact interactions in a trap.

Energies are in units of ħω_k of the layer, lengths in b_ω = √(ħ/(μω_k)).
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq, minimize_scalar

from . import specfun
from .errors import DomainError, NumericError
from .model import IntraPotential

logger = logging.getLogger(__name__)

POLE_OFFSET = 1e-9
ROOT_TOLERANCE = 1e-14
ROOT_RTOL = 4.0 * float(np.finfo(float).eps)
ROOT_MAX_ITERATIONS = 200
QUADRATURE_LENGTH = 12.0
QUADRATURE_ORDER = 20
QUADRATURE_MAX_DEPTH = 40
MSR_AGREEMENT = 1e-4
MSR_FAILURE = 1e-3

_GL_NODES, _GL_WEIGHTS = leggauss(QUADRATURE_ORDER)

KINDS = ("inverse_square", "delta1d_even", "delta1d_odd", "delta2d_s", "harmonic", "free")


@dataclass(frozen=True)
class IntraLevel:
    """One intra-layer eigenstate.

    ``quantum_number`` is n for oscillator-like towers and the generally
    non-integer n_eff for contact interactions; ``energy`` and ``msr`` are in
    ħω_k and b_ω² units, ``omega_k`` converts to ħω₀.
    """
    kind: str
    quantum_number: float
    energy: float
    msr: float
    omega_k: float = 1.0
    l_eff: Optional[float] = None
    dimension: int = 1
    angular: int = 0
    degeneracy: int = 1
    symmetry: str = "symmetric"
    strength: Optional[float] = None

    @property
    def absolute_energy(self) -> float:
        return self.energy * self.omega_k


def l_effective(g: float, dimension: int, angular: int = 0) -> float:
    """l_eff = √(g + c) − 1/2 with c = 1/4 (D=1), l_2²/4 (D=2), (l + 1/2)² (D=3)."""
    if not g >= 0.0:
        raise DomainError(f"inverse-square strength must be g >= 0, got {g}")
    if angular < 0 or int(angular) != angular:
        raise DomainError(f"angular quantum number must be a non-negative integer, got {angular}")
    if dimension == 1:
        if angular != 0:
            raise DomainError("D=1 has no angular quantum number")
        return math.sqrt(g + 0.25) - 0.5
    if dimension == 2:
        return math.sqrt(g + angular * angular / 4.0) - 0.5
    if dimension == 3:
        return math.sqrt(g + (angular + 0.5) ** 2) - 0.5
    raise DomainError(f"dimension must be 1, 2 or 3, got {dimension}")


def inverse_square_levels(g: float, dimension: int, angular: int = 0, count: int = 1,
                          omega_k: float = 1.0) -> list[IntraLevel]:
    """E = 2n + l_eff + 3/2 and ⟨x²⟩ = the same number in b_ω², n = 0 … count − 1."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    l_eff = l_effective(g, dimension, angular)
    if dimension == 3:
        deg = 2 * angular + 1
    elif dimension == 2 and angular > 0:
        deg = 2
    else:
        deg = 1
    levels = []
    for n in range(count):
        value = 2 * n + l_eff + 1.5
        levels.append(IntraLevel(
            kind="inverse_square", quantum_number=float(n), energy=value, msr=value,
            omega_k=omega_k, l_eff=l_eff, dimension=dimension, angular=angular,
            degeneracy=deg, strength=g,
        ))
    return levels


def _bracketed_root(func: Callable[[float], float], lo: float, hi: float) -> float:
    """Root of func on [lo, hi] by Brent's method; the bracket must change sign."""
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        logger.error(f"Root bracket [{lo}, {hi}] has no sign change: f = {f_lo:.3e}, {f_hi:.3e}")
        raise NumericError(f"no sign change on [{lo}, {hi}] (f = {f_lo:.3e}, {f_hi:.3e}); "
                           "the strength is outside the resolvable range")
    try:
        return brentq(func, lo, hi, xtol=ROOT_TOLERANCE, rtol=ROOT_RTOL, maxiter=ROOT_MAX_ITERATIONS)
    except RuntimeError as error:
        raise NumericError(f"root search did not converge on [{lo}, {hi}]: {error}") from error


def delta1d_residual(nu: float, a1_over_b: float) -> float:
    """Monotone form ln|Γ(−ν)| − ln|Γ(1/2 − ν)| − ln 2 − ln(a₁/b) of the 1D even-sector equation.

    The root in (n, n + 1/2) solves Γ(−ν)/(2Γ(1/2 − ν)) = −a₁/b, so that
    a₁/b → ∞ gives ν → n and a₁/b → 0⁺ gives ν → n + 1/2.
    """
    return (specfun.ln_gamma(-nu).value - specfun.ln_gamma(0.5 - nu).value
            - math.log(2.0) - math.log(a1_over_b))


def delta2d_residual(nu: float, ln_b_over_a2: float) -> float:
    """γ_E + ψ(−ν)/2 − ln(b/a₂); decreasing from +∞ to −∞ on every (n, n + 1)."""
    return specfun.EULER_GAMMA + 0.5 * specfun.digamma(-nu).value - ln_b_over_a2


def _msr_hf_1d(nu: float) -> float:
    """⟨x²⟩/b² = 2ν + 1/2 + 1/(ψ(1/2 − ν) − ψ(−ν)) from ∂E/∂ω at fixed a₁."""
    gap = specfun.digamma(0.5 - nu).value - specfun.digamma(-nu).value
    return 2.0 * nu + 0.5 + 1.0 / gap


def _msr_hf_2d(nu: float) -> float:
    """⟨r²⟩/b² = 2ν + 1 + 2/ψ'(−ν) from ∂E/∂ω at fixed a₂."""
    return 2.0 * nu + 1.0 + 2.0 / specfun.trigamma(-nu).value


def delta1d_levels(a1_over_b: float, count: int, omega_k: float = 1.0) -> list[IntraLevel]:
    """Even-sector roots, one per (n, n + 1/2), plus the unshifted odd tower, sorted by energy."""
    if not a1_over_b > 0.0:
        raise DomainError(f"a1/b must be positive, got {a1_over_b}")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    levels = []
    for n in range(count):
        nu = _bracketed_root(lambda v: delta1d_residual(v, a1_over_b), n + POLE_OFFSET, n + 0.5 - POLE_OFFSET)
        levels.append(IntraLevel(
            kind="delta1d_even", quantum_number=nu, energy=2.0 * nu + 0.5, msr=_msr_hf_1d(nu),
            omega_k=omega_k, dimension=1, symmetry="symmetric", strength=a1_over_b,
        ))
        odd = 2.0 * n + 1.5
        levels.append(IntraLevel(
            kind="delta1d_odd", quantum_number=float(n), energy=odd, msr=odd, omega_k=omega_k,
            l_eff=0.0, dimension=1, symmetry="antisymmetric", strength=a1_over_b,
        ))
    levels.sort(key=lambda level: level.energy)
    return levels


def delta2d_levels(ln_b_over_a2: float, count: int, omega_k: float = 1.0) -> list[IntraLevel]:
    """s-wave roots of γ_E + ψ(−ν)/2 = ln(b/a₂), one per (n, n + 1); E = 2ν + 1."""
    if not math.isfinite(ln_b_over_a2):
        raise DomainError(f"ln(b/a2) must be finite, got {ln_b_over_a2}")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    levels = []
    for n in range(count):
        nu = _bracketed_root(lambda v: delta2d_residual(v, ln_b_over_a2), n + POLE_OFFSET, n + 1.0 - POLE_OFFSET)
        levels.append(IntraLevel(
            kind="delta2d_s", quantum_number=nu, energy=2.0 * nu + 1.0, msr=_msr_hf_2d(nu),
            omega_k=omega_k, dimension=2, symmetry="symmetric", strength=ln_b_over_a2,
        ))
    return levels


def wavefunction_eval(level: IntraLevel, x_over_b: float) -> float:
    """Unnormalized radial wavefunction at x/b_ω > 0."""
    x = float(x_over_b)
    if not x > 0.0:
        raise DomainError(f"wavefunction argument must be positive, got {x}")
    z = x * x
    envelope = math.exp(-0.5 * z)
    if level.kind == "delta1d_even":
        return envelope * specfun.tricomi_u(-level.quantum_number, 0.5, z).value
    if level.kind == "delta2d_s":
        return envelope * specfun.tricomi_u(-level.quantum_number, 1.0, z).value
    if level.kind in ("inverse_square", "delta1d_odd"):
        n = int(round(level.quantum_number))
        l_eff = level.l_eff
        return x ** (l_eff + 1.0) * envelope * specfun.assoc_laguerre(n, l_eff + 0.5, z).value
    raise DomainError(f"no closed-form wavefunction for level kind {level.kind}")


def _measure_power(level: IntraLevel) -> int:
    return 1 if level.kind == "delta2d_s" else 0


def _panel_moments(level: IntraLevel, a: float, b: float) -> np.ndarray:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    xs = mid + half * _GL_NODES
    power = _measure_power(level)
    density = np.array([wavefunction_eval(level, x) ** 2 * x ** power for x in xs])
    weighted = _GL_WEIGHTS * density * half
    return np.array([weighted.sum(), (weighted * xs * xs).sum()])


def _adaptive(level: IntraLevel, a: float, b: float, whole: np.ndarray, depth: int) -> np.ndarray:
    mid = 0.5 * (a + b)
    left = _panel_moments(level, a, mid)
    right = _panel_moments(level, mid, b)
    both = left + right
    if np.all(np.abs(both - whole) <= np.maximum(1e-12 * np.abs(both), 1e-16)):
        return both
    if depth >= QUADRATURE_MAX_DEPTH:
        logger.warning(f"Quadrature depth limit reached on [{a:.3e}, {b:.3e}]")
        return both
    return _adaptive(level, a, mid, left, depth + 1) + _adaptive(level, mid, b, right, depth + 1)


def _moments(level: IntraLevel, length: float = QUADRATURE_LENGTH) -> np.ndarray:
    total = np.zeros(2)
    edges = np.linspace(0.0, length, int(length) + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        total += _adaptive(level, a, b, _panel_moments(level, a, b), 0)
    return total


def msr_by_quadrature(level: IntraLevel) -> float:
    """⟨x²⟩/b² from Gauss-Legendre quadrature of the wavefunction on (0, 12 b]."""
    norm, moment = _moments(level)
    return float(moment / norm)


def msr_by_hellmann_feynman(level: IntraLevel) -> float:
    """⟨x²⟩/b² = ∂E/∂ω at fixed scattering length, from the implicit eigenvalue equation."""
    if level.kind == "delta1d_even":
        return _msr_hf_1d(level.quantum_number)
    if level.kind == "delta2d_s":
        return _msr_hf_2d(level.quantum_number)
    return level.msr


def delta_msr(level: IntraLevel, a_over_b: Optional[float] = None) -> float:
    """⟨x²⟩/b_ω² of a contact-interaction level, checked by quadrature against Hellmann–Feynman."""
    if level.kind not in ("delta1d_even", "delta1d_odd", "delta2d_s"):
        raise DomainError(f"delta_msr needs a delta level, got {level.kind}")
    if a_over_b is not None and level.strength is not None:
        stored = level.strength if level.kind != "delta2d_s" else math.exp(-level.strength)
        if abs(stored - a_over_b) > 1e-12 * max(1.0, abs(a_over_b)):
            raise DomainError(f"level was solved at a/b={stored}, not {a_over_b}")
    if level.kind == "delta1d_odd":
        return level.msr
    by_hf = msr_by_hellmann_feynman(level)
    by_quad = msr_by_quadrature(level)
    gap = abs(by_hf - by_quad)
    if gap > MSR_FAILURE:
        raise NumericError(f"radius routes disagree by {gap:.3e} for nu={level.quantum_number:.12f}")
    if gap > MSR_AGREEMENT:
        logger.warning(f"Radius routes disagree by {gap:.3e} for nu={level.quantum_number:.12f}")
    return by_hf


def normalized_wavefunction(level: IntraLevel, grid: Sequence[float]) -> np.ndarray:
    """Radial samples normalized to ∫ |ψ|² x^(D−1) dx = 1 (reduced radial form for inverse-square)."""
    norm, _ = _moments(level)
    values = np.array([wavefunction_eval(level, x) for x in grid])
    return values / math.sqrt(norm)


def universal_excitation(a1_over_b: float) -> float:
    """Lowest symmetric intra excitation 2(ν₁ − ν₀) in units of ħω_k."""
    even = [level for level in delta1d_levels(a1_over_b, 2) if level.kind == "delta1d_even"]
    return 2.0 * (even[1].quantum_number - even[0].quantum_number)


def minimum_universal_excitation(lo: float = 1e-3, hi: float = 1e3, points: int = 61) -> tuple[float, float]:
    """(a₁/b, value) at the minimum of the universal excitation curve, log grid then bounded refinement."""
    grid = np.logspace(math.log10(lo), math.log10(hi), points)
    values = [universal_excitation(a) for a in grid]
    best = int(np.argmin(values))
    left = math.log10(grid[max(best - 1, 0)])
    right = math.log10(grid[min(best + 1, points - 1)])
    result = minimize_scalar(lambda t: universal_excitation(10.0 ** t), bounds=(left, right),
                             method="bounded", options={"xatol": 1e-8})
    if result.fun < values[best]:
        return float(10.0 ** result.x), float(result.fun)
    return float(grid[best]), float(values[best])


def intra_energy(potential: IntraPotential, dimension: int, omega_k: float, mu: float, index: int = 0) -> float:
    """Energy in ħω₀ of the ``index``-th symmetric intra level of a doubly occupied layer."""
    from .solvers import solver_for

    solver = solver_for(potential, dimension)
    levels = solver.solve(omega_k, mu, index + 1)
    return levels[index].absolute_energy
