import math

import numpy as np
from django.test import SimpleTestCase
from scipy import special

from apps.stable.rngs import generator
from apps.stats.ecdf import (
    Ecdf, dkw_halfwidth, ks_distance, mean_ci, normal_quantile, proportion_ci
)
from apps.stats.regression import (
    geometric_abscissae, tail_index_fit, trend_monotone
)
from apps.stats.reports import ReportRow, all_passed, failing
from apps.stats.serializers import ReportRowSerializer
from reducedbpre.exceptions import InsufficientSamples


class EcdfTest(SimpleTestCase):
    def test_step_function(self):
        ecdf = Ecdf([3.0, 1.0, 2.0, 2.0])
        self.assertEqual(ecdf(2.0), 0.75)
        self.assertEqual(ecdf.left(2.0), 0.25)
        self.assertEqual(ecdf(0.0), 0.0)
        self.assertEqual(len(ecdf), 4)

    def test_dkw_band(self):
        self.assertAlmostEqual(dkw_halfwidth(10000, 0.01),
                               math.sqrt(math.log(200) / 20000))
        self.assertAlmostEqual(Ecdf(np.arange(100)).band, dkw_halfwidth(100))

    def test_empty_and_nan(self):
        with self.assertRaises(InsufficientSamples):
            Ecdf([]).band
        with self.assertRaises(InsufficientSamples):
            ks_distance(Ecdf([]), special.ndtr)
        with self.assertRaises(ValueError):
            Ecdf([1.0, np.nan])

    def test_ks_against_a_continuous_law(self):
        values = generator(1, 0).standard_normal(5000)
        ecdf = Ecdf(values)
        self.assertLess(ks_distance(ecdf, special.ndtr), 1.5 * ecdf.band)
        self.assertGreater(ks_distance(ecdf, lambda x: special.ndtr(x - 0.5)), 0.15)

    def test_ks_counts_both_sides_of_a_jump(self):
        # a single atom at 0 against the uniform cdf on [0, 1]
        ecdf = Ecdf([0.0])
        uniform = lambda x: np.clip(x, 0.0, 1.0)
        self.assertAlmostEqual(ks_distance(ecdf, uniform), 1.0)

    def test_ks_between_samples(self):
        self.assertEqual(ks_distance(Ecdf([1.0, 2.0]), Ecdf([1.0, 2.0])), 0.0)
        self.assertEqual(ks_distance(Ecdf([1.0]), Ecdf([2.0])), 1.0)

    def test_intervals(self):
        mean, halfwidth = mean_ci([1.0, 2.0, 3.0, 4.0])
        self.assertEqual(mean, 2.5)
        self.assertAlmostEqual(halfwidth, normal_quantile() * math.sqrt(1.25 / 4))
        weighted, _ = mean_ci([1.0, 3.0], weights=[3.0, 1.0])
        self.assertEqual(weighted, 1.5)
        p, halfwidth = proportion_ci(25, 100)
        self.assertEqual(p, 0.25)
        self.assertAlmostEqual(halfwidth, normal_quantile() * math.sqrt(0.1875 / 100))
        with self.assertRaises(InsufficientSamples):
            proportion_ci(0, 0)
        self.assertAlmostEqual(normal_quantile(0.95), 1.959964, places=5)


class RegressionTest(SimpleTestCase):
    def test_power_law_slope(self):
        x = geometric_abscissae(10, 10000, 20)
        slope, stderr = tail_index_fit(x, 3.0 * x ** -0.5)
        self.assertAlmostEqual(slope, -0.5)
        self.assertAlmostEqual(stderr, 0.0)

    def test_too_few_points(self):
        with self.assertRaises(ValueError):
            tail_index_fit([1, 2, 3, 4, 5, 6], [1.0, 0.5, 0.0, 0.0, 0.0, 0.0])

    def test_geometric_abscissae_are_distinct(self):
        x = geometric_abscissae(1, 20, 30)
        self.assertEqual(len(x), len(set(x)))
        self.assertEqual((x[0], x[-1]), (1, 20))

    def test_trend(self):
        self.assertTrue(trend_monotone([0.3, 0.2, 0.1], [0.01] * 3))
        self.assertTrue(trend_monotone([0.1, 0.12, 0.05], [0.02] * 3))
        self.assertFalse(trend_monotone([0.1, 0.3, 0.05], [0.02] * 3))
        with self.assertRaises(ValueError):
            trend_monotone([0.2, 0.1], [0.0, 0.0])


class ReportTest(SimpleTestCase):
    def test_pass_fail(self):
        rows = [ReportRow('thm1', 'thm1', 'ks', 0.05, passed=True),
                ReportRow.interval('thm1', 'delta_negligible', 'q95', 0.8, 0.1,
                                   passed=False)]
        self.assertFalse(all_passed(rows))
        self.assertEqual(failing(rows), rows[1:])
        self.assertAlmostEqual(rows[1].ci_low, 0.7)

    def test_serialized_columns(self):
        row = ReportRow('walk_only', 'ladder_tail_index', 'tau_1 plus', 0.49,
                        0.47, 0.51, '0.5000', True, n=1000)
        data = ReportRowSerializer(row).data
        self.assertTrue(data['pass'])
        self.assertNotIn('passed', data)
        self.assertEqual(data['n'], 1000)
        self.assertIsNone(data['k'])
