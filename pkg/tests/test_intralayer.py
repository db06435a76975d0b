"""Unit tests for the intra-layer two-body problems and their solvers."""
import math
import os
import sys
import unittest

import mpmath
import numpy as np
from parameterized import parameterized
from scipy.integrate import trapezoid

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from disjoint.core import specfun
from disjoint.core.errors import DomainError, NumericError
from disjoint.core.intralayer import (
    delta1d_levels, delta1d_residual, delta2d_levels, delta_msr, intra_energy, inverse_square_levels,
    l_effective, minimum_universal_excitation, msr_by_hellmann_feynman, msr_by_quadrature,
    normalized_wavefunction, universal_excitation, wavefunction_eval,
)
from disjoint.core.model import IntraPotential
from disjoint.core.solvers import DeltaSolver, FreeSolver, HarmonicSolver, InverseSquareSolver, solver_for

mpmath.mp.dps = 30


class TestInverseSquare(unittest.TestCase):
    """Test cases for the inverse-square tower."""

    @parameterized.expand([
        ("one_d_free", 0.0, 1, 0, 0.0),
        ("one_d_coupled", 2.0, 1, 0, 1.0),
        ("three_d_p_wave", 0.0, 3, 1, 1.0),
        ("three_d_coupled", 0.75, 3, 0, 0.5),
    ])
    def test_l_effective(self, name, g, dimension, angular, expected):
        """Test l_eff for the supported dimensions."""
        self.assertAlmostEqual(l_effective(g, dimension, angular), expected, delta=1e-14)

    @parameterized.expand([
        ("negative_g", -0.1, 1, 0),
        ("angular_in_1d", 1.0, 1, 1),
        ("bad_dimension", 1.0, 4, 0),
    ])
    def test_l_effective_domain(self, name, g, dimension, angular):
        """Test invalid inverse-square arguments."""
        with self.assertRaises(DomainError):
            l_effective(g, dimension, angular)

    def test_levels(self):
        """Test E = ⟨x²⟩ = 2n + l_eff + 3/2."""
        levels = inverse_square_levels(2.0, 1, count=3, omega_k=2.0)
        self.assertEqual([level.energy for level in levels], [2.5, 4.5, 6.5])
        self.assertEqual([level.msr for level in levels], [2.5, 4.5, 6.5])
        self.assertEqual(levels[0].absolute_energy, 5.0)
        self.assertEqual(inverse_square_levels(0.0, 3, angular=2)[0].degeneracy, 5)

    @parameterized.expand([
        ("ground", 0.0, 0),
        ("excited", 0.0, 2),
        ("coupled", 2.0, 1),
    ])
    def test_quadrature_reproduces_closed_form(self, name, g, n):
        """Test that quadrature of the Laguerre wavefunction gives 2n + l_eff + 3/2."""
        level = inverse_square_levels(g, 1, count=n + 1)[n]
        self.assertAlmostEqual(msr_by_quadrature(level), level.msr, delta=1e-8)

    def test_normalized_wavefunction(self):
        """Test ∫ |ψ|² dx = 1 on a fine grid."""
        level = inverse_square_levels(2.0, 1, count=2)[1]
        grid = np.linspace(1e-6, 12.0, 6001)
        values = normalized_wavefunction(level, grid)
        self.assertAlmostEqual(trapezoid(values ** 2, grid), 1.0, delta=1e-4)


class TestDeltaOneD(unittest.TestCase):
    """Test cases for the one-dimensional contact interaction."""

    @parameterized.expand([
        ("weak_binding", 0.05),
        ("unit", 1.0),
        ("strong_length", 20.0),
    ])
    def test_ground_root_solves_gamma_ratio(self, name, a1_over_b):
        """Test |Γ(−ν)|/Γ(1/2 − ν) = 2a₁/b at the ground root."""
        nu = delta1d_levels(a1_over_b, 1)[0].quantum_number
        self.assertGreater(nu, 0.0)
        self.assertLess(nu, 0.5)
        ratio = abs(mpmath.gamma(-mpmath.mpf(nu))) / mpmath.gamma(0.5 - mpmath.mpf(nu))
        self.assertAlmostEqual(float(ratio), 2.0 * a1_over_b, delta=1e-8 * 2.0 * a1_over_b)
        self.assertLess(abs(delta1d_residual(nu, a1_over_b)), 1e-9)

    def test_level_ordering(self):
        """Test interleaved even roots and the unshifted odd tower."""
        levels = delta1d_levels(1.0, 2)
        self.assertEqual([level.kind for level in levels],
                         ["delta1d_even", "delta1d_odd", "delta1d_even", "delta1d_odd"])
        self.assertEqual(levels[1].energy, 1.5)
        self.assertEqual(levels[3].energy, 3.5)
        self.assertGreater(levels[2].quantum_number, 1.0)
        self.assertLess(levels[2].quantum_number, 1.5)

    @parameterized.expand([
        ("large_length", 1e6, 0.5),
        ("small_length", 1e-6, 1.5),
    ])
    def test_msr_limits(self, name, a1_over_b, expected):
        """Test ⟨x²⟩/b² between the free and the hard-core values."""
        level = delta1d_levels(a1_over_b, 1)[0]
        self.assertAlmostEqual(msr_by_hellmann_feynman(level), expected, delta=1e-4)

    def test_msr_decreases_with_length(self):
        """Test that the ground radius shrinks monotonically as a₁/b grows."""
        strengths = np.logspace(-2, 2, 9)
        radii = [delta1d_levels(a, 1)[0].msr for a in strengths]
        self.assertTrue(all(later < earlier for earlier, later in zip(radii, radii[1:])))

    @parameterized.expand([(f"strength_{i:02d}", float(a)) for i, a in enumerate(np.logspace(-1, 1, 20))])
    def test_radius_routes_agree(self, name, a1_over_b):
        """Test quadrature against the Hellmann–Feynman radius."""
        level = delta1d_levels(a1_over_b, 1)[0]
        self.assertLess(abs(msr_by_quadrature(level) - msr_by_hellmann_feynman(level)), 1e-4)
        self.assertEqual(delta_msr(level, a1_over_b), msr_by_hellmann_feynman(level))

    def test_delta_msr_rejects_other_strength(self):
        """Test the strength guard and the non-delta guard."""
        level = delta1d_levels(1.0, 1)[0]
        with self.assertRaises(DomainError):
            delta_msr(level, 2.0)
        with self.assertRaises(DomainError):
            delta_msr(inverse_square_levels(0.0, 1)[0])

    def test_universal_excitation_minimum(self):
        """Test the dip of 2(ν₁ − ν₀) below 2 and its scaling by ω_k."""
        self.assertLess(universal_excitation(1.0), 2.0)
        self.assertAlmostEqual(universal_excitation(1e4), 2.0, delta=1e-3)
        location, value = minimum_universal_excitation()
        self.assertLess(value, universal_excitation(1.0) + 1e-12)
        self.assertLess(abs(math.sqrt(10.0) * value - 5.90), 0.15)
        self.assertLess(abs(math.sqrt(19.0) * value - 8.14), 0.15)
        self.assertGreater(location, 1e-3)
        self.assertLess(location, 1e3)

    @parameterized.expand([
        ("vanishing_length", 1e-12),
        ("huge_length", 1e12),
    ])
    def test_bracket_without_sign_change_raises(self, name, a1_over_b):
        """Test that a strength outside the pole-offset bracket raises instead of clamping."""
        with self.assertRaises(NumericError):
            delta1d_levels(a1_over_b, 1)

    def test_unresolvable_2d_strength_raises(self):
        """Test the same guard for the 2D equation."""
        with self.assertRaises(NumericError):
            delta2d_levels(1e12, 1)

    @parameterized.expand([
        ("weak_binding", 0.05),
        ("unit", 1.0),
        ("strong_length", 20.0),
    ])
    def test_ground_state_is_nodeless(self, name, a1_over_b):
        """Test that the even ground state keeps one sign on (0, 6b]."""
        level = delta1d_levels(a1_over_b, 1)[0]
        values = np.array([wavefunction_eval(level, x) for x in np.linspace(0.01, 6.0, 200)])
        self.assertTrue(np.all(values > 0.0))

    def test_domain(self):
        """Test non-positive scattering lengths."""
        with self.assertRaises(DomainError):
            delta1d_levels(0.0, 1)
        with self.assertRaises(DomainError):
            wavefunction_eval(delta1d_levels(1.0, 1)[0], 0.0)


class TestDeltaTwoD(unittest.TestCase):
    """Test cases for the two-dimensional s-wave contact interaction."""

    @parameterized.expand([
        ("weak", 20.0),
        ("moderate", 0.5),
        ("strong", -3.0),
    ])
    def test_root_solves_digamma_equation(self, name, ln_b_over_a2):
        """Test γ_E + ψ(−ν)/2 = ln(b/a₂) at the ground root."""
        nu = delta2d_levels(ln_b_over_a2, 1)[0].quantum_number
        self.assertGreater(nu, 0.0)
        self.assertLess(nu, 1.0)
        value = float(mpmath.euler + mpmath.digamma(-mpmath.mpf(nu)) / 2)
        self.assertAlmostEqual(value, ln_b_over_a2, delta=1e-8 * max(1.0, abs(ln_b_over_a2)))

    def test_weak_limit_is_free(self):
        """Test that ln(b/a₂) → ∞ approaches the free s-wave ground state."""
        level = delta2d_levels(50.0, 1)[0]
        self.assertAlmostEqual(level.energy, 1.0, delta=0.05)
        self.assertAlmostEqual(level.msr, 1.0, delta=0.05)
        self.assertAlmostEqual(1.0 / level.quantum_number, 2.0 * 50.0 - specfun.EULER_GAMMA, delta=1.0)

    @parameterized.expand([(f"strength_{i:02d}", float(r)) for i, r in enumerate(np.linspace(-1.0, 3.0, 20))])
    def test_radius_routes_agree(self, name, ln_b_over_a2):
        """Test quadrature against the Hellmann–Feynman radius with the x measure."""
        level = delta2d_levels(ln_b_over_a2, 1)[0]
        self.assertLess(abs(msr_by_quadrature(level) - msr_by_hellmann_feynman(level)), 1e-4)

    @parameterized.expand([
        ("moderate", 2.0),
        ("weak", 3.0),
        ("very_weak", 5.0),
    ])
    def test_ground_state_single_node_at_scattering_length(self, name, ln_b_over_a2):
        """Test that the lowest ν > 0 state changes sign once, near r = a₂, and is nodeless beyond."""
        level = delta2d_levels(ln_b_over_a2, 1)[0]
        a2_over_b = math.exp(-ln_b_over_a2)
        xs = np.geomspace(1e-2 * a2_over_b, 6.0, 400)
        values = np.array([wavefunction_eval(level, x) for x in xs])
        flips = np.nonzero(np.sign(values[1:]) != np.sign(values[:-1]))[0]
        self.assertEqual(len(flips), 1)
        node = xs[flips[0]]
        self.assertGreater(node, 0.8 * a2_over_b)
        self.assertLess(node, 1.25 * a2_over_b)
        outer = values[xs > 2.0 * a2_over_b]
        self.assertTrue(np.all(outer > 0.0))

    def test_roots_per_interval(self):
        """Test one root per (n, n + 1)."""
        levels = delta2d_levels(0.0, 3)
        for n, level in enumerate(levels):
            self.assertGreater(level.quantum_number, n)
            self.assertLess(level.quantum_number, n + 1)


class TestSolvers(unittest.TestCase):
    """Test cases for the intra solver adapters."""

    def test_solver_for(self):
        """Test solver selection by potential kind."""
        self.assertIsInstance(solver_for(IntraPotential.inverse_square(1.0), 1), InverseSquareSolver)
        self.assertIsInstance(solver_for(IntraPotential.delta(scattering_length=1.0), 1), DeltaSolver)
        self.assertIsInstance(solver_for(IntraPotential.harmonic(1.0), 3), HarmonicSolver)
        self.assertIsInstance(solver_for(IntraPotential(), 2), FreeSolver)

    def test_delta_solver_rejects_three_dimensions(self):
        """Test the D=3 guard."""
        with self.assertRaises(DomainError):
            DeltaSolver(IntraPotential.delta(scattering_length=1.0), 3)

    def test_delta_solver_uses_layer_length(self):
        """Test a₁/b_ω with b_ω = 1/√(μω_k)."""
        solver = DeltaSolver(IntraPotential.delta(scattering_length=1.0), 1)
        self.assertAlmostEqual(solver.a_over_b(4.0, 1.0), 2.0, delta=1e-14)
        levels = solver.solve(4.0, 1.0, 2)
        self.assertTrue(all(level.kind == "delta1d_even" for level in levels))
        self.assertEqual(levels[0].quantum_number, delta1d_levels(2.0, 1)[0].quantum_number)

    def test_harmonic_solver(self):
        """Test the √(ω_k² + Ω²) tower with even quanta."""
        levels = HarmonicSolver(math.sqrt(3.0), 1).solve(1.0, 0.5, 2)
        self.assertAlmostEqual(levels[0].energy, 1.0, delta=1e-14)
        self.assertAlmostEqual(levels[1].energy, 5.0, delta=1e-14)
        self.assertAlmostEqual(levels[0].msr, 0.25, delta=1e-14)
        self.assertEqual(levels[0].kind, "harmonic")

    @parameterized.expand([
        ("free_1d", IntraPotential(), 1, 2.0, 1.0),
        ("free_3d", IntraPotential(), 3, 2.0, 3.0),
        ("inverse_square", IntraPotential.inverse_square(2.0), 1, 2.0, 5.0),
    ])
    def test_intra_energy(self, name, potential, dimension, omega_k, expected):
        """Test the symmetric ground energy in ħω₀."""
        self.assertAlmostEqual(intra_energy(potential, dimension, omega_k, 0.5), expected, delta=1e-12)

    def test_capabilities(self):
        """Test the sweep axes each solver advertises."""
        self.assertIn("g", InverseSquareSolver(1.0, 1).get_capabilities())
        self.assertIn("ln_b_over_a2", DeltaSolver(IntraPotential.delta(scattering_ratio=1.0), 2).get_capabilities())


if __name__ == "__main__":
    unittest.main(verbosity=2)
