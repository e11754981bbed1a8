import math

import numpy as np
from django.test import SimpleTestCase
from scipy import special

from apps.runner.constants import (
    ASYMPV_RATIO, EXP_FUNCTIONAL_J, EXP_FUNCTIONAL_POINTS, EXP_FUNCTIONAL_SPREAD,
    EXPONENT_TOLERANCE
)
from apps.stable.laws import StableSpec, norming
from apps.stable.rngs import generator
from apps.stats.ecdf import Ecdf, ks_distance, normal_quantile
from apps.stats.regression import geometric_abscissae
from apps.walk.asymptotics import (
    event_b_probability, exp_functional, ladder_tail_index, renewal_exponent,
    scaled_exp_functional, strict_renewal
)
from apps.walk.conditioned import (
    conditioned_sample_negative, conditioned_sample_positive, rejection_walks,
    resample_ancestors, stay_nonnegative, truncated_walks
)
from apps.walk.constants import METHOD, SIDE
from apps.walk.ladders import (
    RenewalTable, asympv_ratio, estimate_renewal, ladder_decompose, renewal_table
)
from apps.walk.paths import WalkPath, min_stats, simulate_prefixes
from reducedbpre.exceptions import GridRangeError, InsufficientSamples

GAUSSIAN = StableSpec(2.0)


class PathTest(SimpleTestCase):
    def test_prefix_and_min_stats(self):
        path = WalkPath.from_increments([1.0, -0.5, 1.5, 0.0, -3.0])
        np.testing.assert_allclose(path.prefix, [0, 1, 0.5, 2, 2, -1])
        self.assertEqual(path.end, -1.0)
        self.assertEqual(min_stats(path, 1), (-1.0, 5, 2.0))
        self.assertEqual(min_stats(path, 2)[:2], (-1.0, 5))
        self.assertEqual(min_stats(path, 0)[:2], (-1.0, 5))
        with self.assertRaises(ValueError):
            min_stats(path, 6)

    def test_first_minimum_index(self):
        path = WalkPath.from_increments([-1.0, 1.0, -1.0])
        self.assertEqual(min_stats(path, 0)[:2], (-1.0, 1))

    def test_bad_prefix(self):
        with self.assertRaises(ValueError):
            WalkPath(np.array([1.0]), np.array([1.0, 2.0]))


class LadderTest(SimpleTestCase):
    def test_weak_ladders_with_a_tie(self):
        stats = ladder_decompose(WalkPath.from_prefix([0, 1, 0.5, 2, 2, -1]))
        np.testing.assert_array_equal(stats.asc_epochs, [1, 3, 4])
        np.testing.assert_array_equal(stats.asc_heights, [1, 2, 2])
        np.testing.assert_array_equal(stats.strict_heights(SIDE.PLUS), [1, 2])
        self.assertEqual(stats.ties(SIDE.PLUS), 1)
        np.testing.assert_array_equal(stats.desc_epochs, [5])
        np.testing.assert_array_equal(stats.desc_heights, [1])

    def test_too_few_ladders(self):
        stats = ladder_decompose(WalkPath.from_prefix([0, 1, -1]))
        with self.assertRaises(InsufficientSamples):
            estimate_renewal([stats] * 10, [0.0, 1.0])


class RenewalTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super(RenewalTest, cls).setUpClass()
        cls.table = renewal_table(GAUSSIAN, np.linspace(0, 25, 251), 2000, 2000,
                                  generator(11, 0))

    def test_starts_at_one(self):
        self.assertEqual(self.table.v_plus[0], 1.0)
        self.assertEqual(self.table.v_minus[0], 1.0)
        self.assertEqual(self.table.zeta(SIDE.PLUS), 0.0)
        self.assertEqual(self.table.zeta(SIDE.MINUS), 0.0)

    def test_linear_growth_for_finite_variance(self):
        # E H = 1 / sqrt(2) for standard normal steps
        slope = (self.table.v_plus_at(6.0) - self.table.v_plus_at(3.0)) / 3.0
        self.assertAlmostEqual(slope, math.sqrt(2), delta=0.2)
        z = normal_quantile()
        for side, expected in ((SIDE.PLUS, GAUSSIAN.alpha_rho),
                               (SIDE.MINUS, GAUSSIAN.alpha_one_minus_rho)):
            value, stderr = renewal_exponent(self.table, side)
            self.assertLessEqual(abs(value - expected),
                                 EXPONENT_TOLERANCE + z * stderr)

    def test_symmetric_sides(self):
        np.testing.assert_allclose(self.table.v_plus, self.table.v_minus,
                                   rtol=0.1)

    def test_asympv_ratio(self):
        far = asympv_ratio(self.table, 0.9 * self.table.grid[-1], 1.0)
        low, high = ASYMPV_RATIO
        self.assertTrue(low <= far <= high)
        self.assertLess(far, asympv_ratio(self.table, 2.0, 1.0))
        with self.assertRaises(GridRangeError):
            asympv_ratio(self.table, 26.0, 1.0)

    def test_strict_equals_weak_without_ties(self):
        strict, weak = strict_renewal(self.table, SIDE.MINUS)
        np.testing.assert_allclose(strict, weak)

    def test_lookup_and_extrapolation(self):
        with self.assertRaises(GridRangeError):
            self.table.v_minus_at(30.0)
        beyond = self.table.v_minus_at(50.0, extrapolate=True)
        self.assertAlmostEqual(float(beyond), 2 * self.table.v_minus[-1], delta=1e-9)

    def test_csv(self):
        loaded = RenewalTable.from_csv(self.table.to_csv())
        np.testing.assert_allclose(loaded.v_plus, self.table.v_plus)
        self.assertEqual(loaded.n_ladder_samples, 2000)

    def test_reflected(self):
        reflected = self.table.reflected()
        np.testing.assert_array_equal(reflected.v_plus, self.table.v_minus)


class TieTest(SimpleTestCase):
    """Walks with ties on the ascending side only."""

    @classmethod
    def setUpClass(cls):
        super(TieTest, cls).setUpClass()
        prefixes = [[0, -1, 0, 2]] * 500 + [[0, 1, -1]] * 500
        ladders = [ladder_decompose(WalkPath.from_prefix(p)) for p in prefixes]
        cls.table = estimate_renewal(ladders, [0.0, 1.0, 2.0])

    def test_zeta_per_side(self):
        self.assertEqual(self.table.zeta(SIDE.PLUS), 0.5)
        self.assertEqual(self.table.zeta(SIDE.MINUS), 0.0)
        self.assertAlmostEqual(self.table.v_plus[0], 2.0)
        self.assertAlmostEqual(self.table.v_minus[0], 1.0)

    def test_strict_renewal_uses_its_own_side(self):
        strict, weak = strict_renewal(self.table, SIDE.MINUS)
        np.testing.assert_allclose(strict, weak)
        strict, weak = strict_renewal(self.table, SIDE.PLUS)
        np.testing.assert_allclose(weak, 0.5 * self.table.v_plus)

    def test_sides_survive_csv_and_reflection(self):
        loaded = RenewalTable.from_csv(self.table.to_csv())
        self.assertEqual((loaded.zeta_plus, loaded.zeta_minus), (0.5, 0.0))
        reflected = self.table.reflected()
        self.assertEqual(reflected.zeta(SIDE.MINUS), 0.5)


class ConditionedTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super(ConditionedTest, cls).setUpClass()
        cls.table = renewal_table(GAUSSIAN, np.linspace(0, 10, 101), 1000, 1000,
                                  generator(12, 0))

    def test_truncated_walks_stay_nonnegative(self):
        batch = stay_nonnegative(GAUSSIAN, 30, 0.0, 500, generator(13, 0))
        self.assertTrue(np.all(batch.prefixes >= 0))
        self.assertTrue(np.all(batch.log_weights <= 0))
        self.assertAlmostEqual(batch.weights.sum(), 1.0)
        self.assertLessEqual(batch.effective_size, 500)

    def test_rejection_and_truncation_agree(self):
        n = 8
        truncated = stay_nonnegative(GAUSSIAN, n, 0.0, 20000, generator(14, 0),
                                     keep_paths=False)
        rejected = rejection_walks(GAUSSIAN, n, 0.0, 5000, generator(14, 1),
                                   keep_paths=False)
        mean_truncated = np.sum(truncated.weights * truncated.endpoints)
        mean_rejected = rejected.endpoints.mean()
        spread = rejected.endpoints.std() / math.sqrt(5000)
        self.assertLess(abs(mean_truncated - mean_rejected), 5 * spread + 0.05)

    def test_positive_paths(self):
        batch = conditioned_sample_positive(
            GAUSSIAN, 20, 1.0, generator(15, 0), table=self.table, n_paths=50,
            extrapolate=True)
        self.assertEqual(len(batch), 50)
        self.assertTrue(np.all(batch.prefixes[:, 0] == 1.0))
        self.assertTrue(np.all(batch.prefixes >= 0))
        self.assertEqual(len(batch.paths()), 50)

    def test_negative_paths(self):
        batch = conditioned_sample_negative(
            GAUSSIAN, 20, 1.0, generator(16, 0), table=self.table, n_paths=50,
            extrapolate=True)
        self.assertTrue(np.all(batch.prefixes[:, 0] == -1.0))
        self.assertTrue(np.all(batch.prefixes <= 0))

    def test_rejection_method(self):
        batch = conditioned_sample_positive(
            GAUSSIAN, 10, 0.5, generator(17, 0), method=METHOD.REJECTION,
            table=self.table, n_paths=20, extrapolate=True)
        self.assertEqual(batch.method, METHOD.REJECTION)
        self.assertTrue(np.all(batch.prefixes >= 0))

    def test_resampling_keeps_the_staying_probability(self):
        # Sparre Andersen: P(L_n >= 0) = C(2n, n) / 4^n for symmetric steps
        n = 400
        exact = math.exp(special.gammaln(2 * n + 1) - 2 * special.gammaln(n + 1) -
                         2 * n * math.log(2))
        batch = truncated_walks(GAUSSIAN, n, 0.0, 5000, generator(14, 2),
                                keep_paths=False)
        estimate = np.exp(batch.log_weights).mean()
        self.assertLess(abs(estimate / exact - 1), 0.1)
        self.assertGreater(batch.effective_size, 1000)

    def test_resampling_is_triggered_by_degenerate_weights(self):
        index, level = resample_ancestors(np.zeros(10), generator(14, 3))
        self.assertIsNone(index)
        log_weights = np.log([1.0] + [1e-6] * 9)
        index, level = resample_ancestors(log_weights, generator(14, 3))
        self.assertEqual(len(index), 10)
        self.assertAlmostEqual(level, math.log(np.exp(log_weights).mean()))

    def test_h_transform_matches_rejection(self):
        n = 1000
        options = dict(table=self.table, n_paths=10000, extrapolate=True,
                       keep_paths=False)
        h = conditioned_sample_positive(GAUSSIAN, n, 0.0, generator(23, 0),
                                        **options)
        reference = conditioned_sample_positive(
            GAUSSIAN, n, 0.0, generator(23, 1), method=METHOD.REJECTION,
            **options)
        self.assertIsNone(reference.prefixes)
        scale = norming(GAUSSIAN, n)
        first, second = Ecdf(h.endpoints / scale), Ecdf(reference.endpoints / scale)
        self.assertLess(ks_distance(first, second), first.band + second.band)

    def test_preconditions(self):
        with self.assertRaises(ValueError):
            conditioned_sample_positive(GAUSSIAN, 10, -1.0, generator(18, 0),
                                        table=self.table)
        with self.assertRaises(ValueError):
            conditioned_sample_positive(GAUSSIAN, 10, 0.0, generator(18, 0))


class AsymptoticsTest(SimpleTestCase):
    def test_event_b_is_unbiased(self):
        n, x = 10, 2.0
        estimate = event_b_probability(GAUSSIAN, x, n, 20000, generator(19, 0))
        prefix = simulate_prefixes(GAUSSIAN, n, 200000, generator(19, 1))
        hits = (prefix.min(axis=1) >= 0) & (prefix[:, -1] <= x)
        direct = hits.mean()
        spread = math.sqrt(direct * (1 - direct) / 200000)
        self.assertLess(abs(estimate.estimate - direct),
                        4 * (spread + estimate.stderr))

    def test_event_b_below_zero(self):
        estimate = event_b_probability(GAUSSIAN, -1.0, 10, 100, generator(20, 0))
        self.assertEqual(estimate.estimate, 0.0)

    def test_ladder_tail_index(self):
        z = normal_quantile()
        for side, expected in ((SIDE.PLUS, GAUSSIAN.rho),
                               (SIDE.MINUS, 1 - GAUSSIAN.rho)):
            value, stderr = ladder_tail_index(GAUSSIAN, side, 4000, 1000,
                                              generator(21, 0))
            self.assertLessEqual(abs(value - expected),
                                 EXPONENT_TOLERANCE + z * stderr)

    def test_exp_functional(self):
        j, means, errors = exp_functional(GAUSSIAN, [0, 5, 10, 20], 4000,
                                          generator(22, 0))
        np.testing.assert_array_equal(j, [0, 5, 10, 20])
        self.assertEqual(means[0], 1.0)
        self.assertTrue(np.all(np.diff(means) < 0))
        self.assertTrue(np.all(errors[1:] > 0))

    def test_scaled_exp_functional_is_bounded(self):
        j_grid = geometric_abscissae(*EXP_FUNCTIONAL_J, EXP_FUNCTIONAL_POINTS)
        j, scaled, errors = scaled_exp_functional(GAUSSIAN, j_grid, 20000,
                                                  generator(22, 1))
        self.assertEqual((j[0], j[-1]), EXP_FUNCTIONAL_J)
        self.assertTrue(np.all(scaled > 0))
        self.assertLessEqual(scaled.max() / scaled.min(), EXP_FUNCTIONAL_SPREAD)
