"""Unit tests for the special-function kernel, cross-checked against mpmath and scipy."""
import math
import os
import sys
import unittest

import mpmath
import numpy as np
from parameterized import parameterized
from scipy import special

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from disjoint.core import specfun
from disjoint.core.errors import DomainError, PoleError

mpmath.mp.dps = 30


class TestGammaFamily(unittest.TestCase):
    """Test cases for log-gamma, digamma and trigamma."""

    @parameterized.expand([
        ("half", 0.5),
        ("small", 1e-3),
        ("moderate", 7.25),
        ("large", 140.5),
        ("negative_fraction", -0.3),
        ("negative_near_pole", -2.0 + 1e-9),
        ("negative_far", -10.75),
    ])
    def test_ln_gamma_matches_mpmath(self, name, x):
        """Test ln|Γ(x)| and its sign."""
        result = specfun.ln_gamma(x)
        expected = mpmath.gamma(mpmath.mpf(x))
        self.assertAlmostEqual(result.value, float(mpmath.log(abs(expected))),
                               delta=1e-12 * max(1.0, abs(result.value)))
        self.assertEqual(result.sign, 1 if expected > 0 else -1)

    @parameterized.expand([
        ("zero", 0.0),
        ("minus_one", -1.0),
        ("minus_seven", -7.0),
    ])
    def test_ln_gamma_pole(self, name, x):
        """Test that poles raise PoleError."""
        with self.assertRaises(PoleError):
            specfun.ln_gamma(x)

    def test_reciprocal_gamma_vanishes_at_poles(self):
        """Test 1/Γ at poles and away from them."""
        self.assertEqual(specfun.reciprocal_gamma(-3.0), 0.0)
        self.assertAlmostEqual(specfun.reciprocal_gamma(4.0), 1.0 / 6.0, delta=1e-15)
        self.assertAlmostEqual(specfun.gamma(0.5), math.sqrt(math.pi), delta=1e-14)

    @parameterized.expand([
        ("one", 1.0),
        ("half", 0.5),
        ("small", 0.01),
        ("above_switch", 9.5),
        ("negative", -0.5),
        ("negative_near_pole", -1.0 + 1e-7),
        ("negative_far", -5.3),
    ])
    def test_digamma_matches_mpmath(self, name, x):
        """Test ψ(x) against mpmath."""
        expected = float(mpmath.digamma(mpmath.mpf(x)))
        self.assertAlmostEqual(specfun.digamma(x).value, expected, delta=1e-12 * max(1.0, abs(expected)))

    def test_digamma_at_one(self):
        """Test ψ(1) = −γ_E."""
        self.assertAlmostEqual(specfun.digamma(1.0).value, -specfun.EULER_GAMMA, delta=1e-13)

    @parameterized.expand([
        ("one", 1.0),
        ("small", 0.05),
        ("large", 20.0),
        ("negative", -0.25),
        ("negative_far", -3.6),
    ])
    def test_trigamma_matches_mpmath(self, name, x):
        """Test ψ′(x) against mpmath."""
        expected = float(mpmath.psi(1, mpmath.mpf(x)))
        self.assertAlmostEqual(specfun.trigamma(x).value, expected, delta=1e-11 * max(1.0, abs(expected)))

    def test_digamma_pole(self):
        """Test that ψ raises at non-positive integers."""
        with self.assertRaises(PoleError):
            specfun.digamma(-2.0)
        with self.assertRaises(PoleError):
            specfun.trigamma(0.0)

    @parameterized.expand([
        ("tenth", 0.1),
        ("quarter", 0.25),
        ("half", 0.5),
        ("three_quarters", 0.75),
        ("near_next_integer", 0.97),
    ])
    def test_reflection_formula(self, name, fraction):
        """Test Γ(x)Γ(1 − x) = π/sin(πx) for x = k + fraction, k = −10 … 9."""
        for k in range(-10, 10):
            x = k + fraction
            expected = math.pi / math.sin(math.pi * x)
            product = specfun.gamma(x) * specfun.gamma(1.0 - x)
            self.assertAlmostEqual(product, expected, delta=1e-10 * abs(expected), msg=f"x={x}")

    @parameterized.expand([
        ("seed_1", 1),
        ("seed_2", 2),
        ("seed_3", 3),
        ("seed_4", 4),
    ])
    def test_digamma_recurrence(self, name, seed):
        """Test ψ(x + 1) = ψ(x) + 1/x on 250 random points in (−20, 20) away from the poles."""
        rng = np.random.default_rng(seed)
        points = rng.uniform(-20.0, 20.0, 250)
        for x in points:
            x = float(x)
            if x < 0.5 and abs(x - round(x)) < 0.01:
                continue
            lower = specfun.digamma(x).value
            upper = specfun.digamma(x + 1.0).value
            scale = max(1.0, abs(lower), abs(upper), abs(1.0 / x))
            self.assertAlmostEqual(upper, lower + 1.0 / x, delta=1e-12 * scale, msg=f"x={x}")


class TestConfluentFunctions(unittest.TestCase):
    """Test cases for Laguerre, Kummer M and Tricomi U."""

    @parameterized.expand([
        ("degree_zero", 0, 0.5, 1.3),
        ("degree_three", 3, -0.5, 2.0),
        ("degree_five", 5, 1.5, 0.7),
    ])
    def test_assoc_laguerre(self, name, n, alpha, z):
        """Test generalized Laguerre polynomials against scipy."""
        expected = float(special.eval_genlaguerre(n, alpha, z))
        self.assertAlmostEqual(specfun.assoc_laguerre(n, alpha, z).value, expected,
                               delta=1e-12 * max(1.0, abs(expected)))

    @parameterized.expand([
        ("positive_a", 0.3, 0.5, 2.0),
        ("negative_a", -0.7, 1.5, 3.0),
        ("terminating", -3.0, 0.5, 4.0),
        ("small_z", 1.2, 2.5, 0.01),
    ])
    def test_kummer_m(self, name, a, b, z):
        """Test M(a, b, z) against mpmath."""
        expected = float(mpmath.hyp1f1(a, b, z))
        self.assertAlmostEqual(specfun.kummer_m(a, b, z).value, expected, delta=1e-11 * max(1.0, abs(expected)))

    def test_kummer_m_pole_in_b(self):
        """Test that non-positive integer b raises PoleError."""
        with self.assertRaises(PoleError):
            specfun.kummer_m(0.5, -1.0, 1.0)

    @parameterized.expand([
        ("half_b", -0.3, 0.5, 1.5),
        ("half_b_small_z", -0.1, 0.5, 0.05),
        ("half_b_root_region", -1.2, 0.5, 4.0),
        ("unit_b", -0.4, 1.0, 2.0),
        ("unit_b_small_z", -0.05, 1.0, 0.01),
        ("unit_b_near_integer", -1.0 + 1e-6, 1.0, 1.0),
        ("asymptotic_half", -0.3, 0.5, 40.0),
        ("asymptotic_unit", -0.6, 1.0, 36.0),
        ("half_b_below_switch", -0.3, 0.5, 19.5),
        ("half_b_above_switch", -0.3, 0.5, 25.0),
        ("half_b_near_thirty", -0.3, 0.5, 29.9),
    ])
    def test_tricomi_u(self, name, a, b, z):
        """Test U(a, b, z) against mpmath on the regimes the wavefunctions use."""
        expected = float(mpmath.hyperu(a, b, z))
        result = specfun.tricomi_u(a, b, z)
        self.assertAlmostEqual(result.value, expected, delta=1e-8 * max(1.0, abs(expected)))

    @parameterized.expand([
        ("negative_far", -0.5, -30.0),
        ("negative_near", 0.0, -4.0),
        ("small_z", 1.5, 0.5),
        ("oscillating", -0.5, 7.0),
        ("oscillating_unit", 0.0, 18.0),
        ("edge", 1.5, 30.0),
    ])
    def test_laguerre_recurrence_matches_explicit_sum(self, name, alpha, z):
        """Test the recurrence against Σ (−1)^k C(n+α, n−k) z^k/k! for n = 0 … 20."""
        for n in range(21):
            terms = [mpmath.binomial(n + alpha, n - k) * mpmath.mpf(z) ** k / mpmath.factorial(k)
                     for k in range(n + 1)]
            expected = float(sum((-1) ** k * term for k, term in enumerate(terms)))
            scale = float(sum(abs(term) for term in terms))
            self.assertAlmostEqual(specfun.assoc_laguerre(n, alpha, z).value, expected,
                                   delta=1e-12 * scale, msg=f"n={n}")

    @parameterized.expand([
        ("half_b", 0.5, 3.0),
        ("half_b_large_z", 0.5, 25.0),
        ("unit_b", 1.0, 0.7),
        ("unit_b_large_z", 1.0, 40.0),
        ("fractional_b", 2.5, 6.0),
    ])
    def test_tricomi_u_laguerre_identity(self, name, b, z):
        """Test U(−n, α+1, z) = (−1)^n n! L_n^α(z) for n = 0 … 10."""
        for n in range(11):
            expected = (-1.0) ** n * math.factorial(n) * float(special.eval_genlaguerre(n, b - 1.0, z))
            reference = float(mpmath.hyperu(-n, b, z))
            # n! L_n^α(−z) bounds the sum of absolute terms
            scale = math.factorial(n) * float(mpmath.laguerre(n, b - 1.0, -z))
            value = specfun.tricomi_u(-float(n), b, z).value
            self.assertAlmostEqual(value, expected, delta=1e-12 * scale, msg=f"n={n}")
            self.assertAlmostEqual(value, reference, delta=1e-12 * scale, msg=f"n={n}")
        self.assertEqual(specfun.tricomi_u(0.0, 0.5, 3.0).value, 1.0)

    @parameterized.expand([
        ("just_above_switch", -0.3, 20.5),
        ("mid", -0.3, 25.0),
        ("below_thirty", -0.3, 29.9),
        ("excited_root_region", -1.3, 22.0),
    ])
    def test_tricomi_u_half_b_large_z_accuracy(self, name, a, z):
        """Test U(a, 1/2, z) to 1e-10 relative between z = 20 and z = 30."""
        expected = float(mpmath.hyperu(a, 0.5, z))
        result = specfun.tricomi_u(a, 0.5, z)
        self.assertAlmostEqual(result.value, expected, delta=1e-10 * abs(expected))
        self.assertLess(result.absolute_error_estimate, 1e-10 * abs(expected))

    @parameterized.expand([
        ("zero_z", -0.3, 0.5, 0.0),
        ("negative_z", -0.3, 0.5, -1.0),
        ("integer_b", -0.3, 2.0, 1.0),
    ])
    def test_tricomi_u_domain(self, name, a, b, z):
        """Test arguments outside the supported domain."""
        with self.assertRaises(DomainError):
            specfun.tricomi_u(a, b, z)


if __name__ == "__main__":
    unittest.main(verbosity=2)
