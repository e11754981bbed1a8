import math

import numpy as np
from django.test import SimpleTestCase
from scipy import integrate, special, stats

from apps.stable.constants import PRESET
from apps.stable.laws import (
    StableSpec, negative_tail, norming, positivity_rho, rho_closed_form,
    sample_increment, stable_cdf, stable_density
)
from apps.stable.meander import meander_density, meander_endpoints
from apps.stable.paths import min_and_endpoint_sampler, sample_path
from apps.stable.rngs import generator


class StableSpecTest(SimpleTestCase):
    def test_presets(self):
        for name, (alpha, beta) in PRESET.PARAMETERS.items():
            spec = StableSpec.preset(name)
            self.assertEqual((spec.alpha, spec.beta), (alpha, beta))
            self.assertTrue(0 < spec.rho < 1)

    def test_gaussian_defaults(self):
        spec = StableSpec(2.0)
        self.assertEqual(spec.c, 0.5)
        self.assertEqual(spec.rho, 0.5)
        self.assertEqual(spec.alpha_rho, 1.0)

    def test_inadmissible_pairs(self):
        for alpha, beta in ((2.0, 0.3), (1.0, 0.5), (0.0, 0.0), (2.5, 0.0),
                            (1.5, 1.0)):
            with self.assertRaises(ValueError):
                StableSpec(alpha, beta)
        with self.assertRaises(ValueError):
            StableSpec(1.5, 0.0, -1.0)

    def test_norming(self):
        self.assertAlmostEqual(norming(StableSpec(2.0), 100), 10.0)
        self.assertAlmostEqual(norming(StableSpec(1.5), 8), 4.0)
        with self.assertRaises(ValueError):
            norming(StableSpec(2.0), 0)


class SamplingTest(SimpleTestCase):
    def test_empirical_characteristic_function(self):
        n = 200000
        for name in PRESET.PARAMETERS:
            spec = StableSpec.preset(name)
            x = sample_increment(spec, generator(1, 0), n)
            for w in (0.5, 1.0, 2.0):
                empirical = np.mean(np.exp(1j * w * x))
                self.assertLess(abs(empirical - spec.characteristic(w)),
                                5 / math.sqrt(n), (name, w))

    def test_same_key_same_stream(self):
        spec = StableSpec(1.5, 0.4)
        first = sample_increment(spec, generator(7, 3), 10)
        second = sample_increment(spec, generator(7, 3), 10)
        other = sample_increment(spec, generator(7, 4), 10)
        np.testing.assert_array_equal(first, second)
        self.assertFalse(np.array_equal(first, other))


class InversionTest(SimpleTestCase):
    def test_gaussian_density_and_cdf(self):
        spec = StableSpec(2.0)
        for x in (-1.5, 0.0, 0.7):
            self.assertAlmostEqual(stable_density(spec, x), stats.norm.pdf(x),
                                   places=6)
            self.assertAlmostEqual(stable_cdf(spec, x), special.ndtr(x), places=6)

    def test_cauchy(self):
        spec = StableSpec(1.0)
        self.assertAlmostEqual(stable_cdf(spec, 1.0), stats.cauchy.cdf(1.0),
                               places=5)

    def test_positivity_matches_closed_form(self):
        for name in PRESET.PARAMETERS:
            spec = StableSpec.preset(name)
            self.assertAlmostEqual(positivity_rho(spec),
                                   rho_closed_form(spec.alpha, spec.beta),
                                   places=4)

    def test_cdf_is_monotone(self):
        spec = StableSpec(1.5, 0.4)
        values = [stable_cdf(spec, x) for x in np.linspace(-5, 5, 21)]
        self.assertTrue(np.all(np.diff(values) >= -1e-7))

    def test_negative_tail_truncated_draws(self):
        tail = negative_tail(StableSpec(1.5, 0.4))
        lower = np.full(2000, -0.5)
        draws = tail.sample_above(lower, generator(2, 0))
        self.assertTrue(np.all(draws >= -0.5))
        self.assertAlmostEqual(float(tail.upper_mass(0.0)),
                               1 - stable_cdf(StableSpec(1.5, 0.4), 0.0), places=6)


class PathsTest(SimpleTestCase):
    def test_path_shape(self):
        path = sample_path(StableSpec(2.0), 50, generator(3, 0))
        self.assertEqual(len(path.values), 51)
        self.assertEqual(path.values[0], 0.0)
        self.assertLessEqual(path.minimum, 0.0)

    def test_reflection_principle(self):
        ensemble = min_and_endpoint_sampler(StableSpec(2.0), 500, 20000,
                                            generator(4, 0))
        band = ensemble.error()
        for z in (-1.5, -0.5):
            # discretized paths see a slightly larger minimum
            self.assertLess(abs(ensemble.probability(min_high=z) -
                                2 * special.ndtr(z)), band + 0.03)


class MeanderTest(SimpleTestCase):
    def test_endpoints_are_nonnegative(self):
        points, weights = meander_endpoints(StableSpec(2.0), 2000,
                                            generator(5, 0), walk_length=200)
        self.assertTrue(np.all(points >= 0))
        self.assertAlmostEqual(weights.sum(), 1.0)

    def test_gaussian_meander_is_rayleigh(self):
        z = np.linspace(0, 5, 101)
        density = meander_density(StableSpec(2.0), z, 10000, generator(6, 0))
        rayleigh = z * np.exp(-z ** 2 / 2)
        inner = (z >= 0.1) & (z <= 3.0)
        self.assertLess(np.max(np.abs(density - rayleigh)[inner]), 0.02)
        self.assertEqual(density[0], 0.0)

    def test_stable_meander_vanishes_at_zero(self):
        z = np.linspace(0, 8, 81)
        density = meander_density(StableSpec(1.5), z, 2000, generator(6, 2),
                                  walk_length=200)
        self.assertEqual(density[0], 0.0)
        self.assertTrue(np.all(density >= 0))
        self.assertAlmostEqual(integrate.trapezoid(density, z), 1.0)

    def test_bad_grid(self):
        with self.assertRaises(ValueError):
            meander_density(StableSpec(2.0), [1.0, 0.5], 10, generator(6, 1))
