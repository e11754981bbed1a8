import math

import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from apps.bpre.constants import REGIME
from apps.bpre.diagnostics import diagnostics_check, genealogy_check, quantile_ci
from apps.bpre.oracle import (
    brute_force_tiny, empirical_law, total_variation, transition_matrix
)
from apps.bpre.populations import (
    generation_sizes, reduced_count, reduced_profile, simulate_generation_chain,
    simulate_tree
)
from apps.bpre.scenarios import ScenarioSpec, schedule
from apps.bpre.theta import estimate_theta, ratio_estimate
from apps.bpre.trials import (
    ReducedSample, replay_trial, run_conditioned_trial, run_trial_block,
    survival_given_env
)
from apps.envs.constants import FAMILY
from apps.envs.environments import EnvironmentModel, EnvRealization, TwoPointLaw
from apps.envs.generating import log_survival_profile
from apps.stable.laws import StableSpec, norming
from apps.stable.rngs import generator
from apps.walk.ladders import renewal_table
from reducedbpre.exceptions import InsufficientSamples, StateSpaceTooLarge

GAUSSIAN = StableSpec(2.0)
LF_GAUSSIAN = EnvironmentModel(FAMILY.LINEAR_FRACTIONAL, GAUSSIAN)
COIN = TwoPointLaw(-1.0, 1.0)


class ScenarioTest(SimpleTestCase):
    def test_schedules_respect_orderings(self):
        n = 2000
        k, r = schedule(REGIME.THM1, n)
        self.assertTrue(n > k > n - r)
        k, r = schedule(REGIME.THM3_K_GG_R, n)
        self.assertGreater(k, r)
        k, r = schedule(REGIME.THM3_MIN_GG_K, n)
        self.assertGreater(min(r, n - r), k)
        k, r = schedule(REGIME.THM2, n, theta=2.0)
        self.assertEqual(k, math.ceil(2.0 * (n - r)))
        self.assertEqual(schedule(REGIME.MEANDER, 100, meander_s=0.3), (99, 30))

    def test_ordering_violation(self):
        with self.assertRaises(ValueError):
            ScenarioSpec(LF_GAUSSIAN, 2000, REGIME.THM1, k=10, r=1900)
        with self.assertRaises(ValueError):
            ScenarioSpec(LF_GAUSSIAN, 100, REGIME.EXPLICIT, k=5)
        with self.assertRaises(ValueError):
            ScenarioSpec(LF_GAUSSIAN, 100, REGIME.THM1, t=0.0)

    def test_thresholds(self):
        scenario = ScenarioSpec(LF_GAUSSIAN, 400, REGIME.THM1, t=2.0)
        self.assertAlmostEqual(scenario.walk_threshold,
                               2.0 * norming(GAUSSIAN, scenario.k))
        meander = ScenarioSpec(LF_GAUSSIAN, 400, REGIME.MEANDER)
        self.assertEqual(meander.walk_threshold, np.inf)
        explicit = ScenarioSpec(LF_GAUSSIAN, 4, REGIME.EXPLICIT, r=0, threshold=1.0)
        self.assertEqual((explicit.k, explicit.r, explicit.walk_threshold),
                         (3, 0, 1.0))


class PopulationTest(SimpleTestCase):
    def test_chain_stops_at_extinction(self):
        env = EnvRealization(FAMILY.POISSON, np.full(30, -5.0))
        sizes = simulate_generation_chain(env, 30, generator(1, 0), z0=3)
        self.assertEqual(sizes[0], 3)
        self.assertEqual(sizes[-1], 0)

    def test_reduced_count_bounds(self):
        z_r = np.array([0, 5, 10])
        counts = reduced_count(z_r, np.array([0.5, 1.0, 0.0]), generator(1, 1))
        np.testing.assert_array_equal(counts, [0, 0, 10])
        with self.assertRaises(ValueError):
            reduced_count(np.array([-1]), np.array([0.5]), generator(1, 1))

    def test_reduced_profile(self):
        env = EnvRealization(FAMILY.LINEAR_FRACTIONAL, np.full(8, 0.3))
        rng = generator(2, 0)
        for _ in range(20):
            tree = simulate_tree(env, rng)
            profile = reduced_profile(tree)
            sizes = generation_sizes(tree)
            self.assertTrue(np.all(np.diff(profile) >= 0))
            self.assertTrue(np.all(profile <= sizes))
            self.assertEqual(profile[-1], sizes[-1])
            self.assertEqual(profile[0], int(sizes[-1] > 0))

    def test_reduced_count_is_binomial(self):
        size = 100000
        counts = reduced_count(np.full(size, 5), np.full(size, 0.5), generator(1, 2))
        observed = np.bincount(counts, minlength=6)
        expected = stats.binom.pmf(np.arange(6), 5, 0.5) * size
        self.assertGreater(stats.chisquare(observed, expected).pvalue, 1e-3)
        self.assertAlmostEqual(counts.mean(), 2.5,
                               delta=4 * math.sqrt(1.25 / size))

    def test_conditional_mean_of_reduced_count(self):
        env = EnvRealization(FAMILY.LINEAR_FRACTIONAL,
                             generator(3, 0).standard_normal(12))
        report = genealogy_check(env, 3000, generator(3, 1), r=6)
        self.assertEqual(report.r, 6)
        self.assertLess(abs(report.residual), 4 * report.stderr)
        self.assertLess(report.closed_form_gap, 1e-9)
        profile = log_survival_profile(env.family, env.increments)
        self.assertAlmostEqual(
            float(survival_given_env(env.family, env.increments[6:])),
            math.exp(profile[6]))

    def test_genealogy_on_poisson_has_no_closed_form(self):
        env = EnvRealization(FAMILY.POISSON, np.zeros(6))
        report = genealogy_check(env, 200, generator(3, 2))
        self.assertEqual(report.r, 3)
        self.assertIsNone(report.closed_form_gap)
        with self.assertRaises(ValueError):
            genealogy_check(env, 200, generator(3, 2), r=7)


class OracleTest(SimpleTestCase):
    def test_transition_rows_are_laws(self):
        for family in (FAMILY.LINEAR_FRACTIONAL, FAMILY.POISSON):
            matrix = transition_matrix(family, 0.5, 20)
            np.testing.assert_allclose(matrix.sum(axis=1), 1.0)

    def test_exact_law_has_unit_mass(self):
        exact = brute_force_tiny(COIN, FAMILY.LINEAR_FRACTIONAL, 3, 1, 0.5)
        self.assertAlmostEqual(exact.total_mass, 1.0, places=9)
        law, mass = exact.accepted()
        self.assertAlmostEqual(sum(law.values()), 1.0)
        self.assertTrue(0 < mass < exact.survival())

    def test_critical_geometric_survival(self):
        # X = 0 gives geometric offspring with p = 1/2: P(Z_n > 0) = 1 / (n + 1)
        fixed = TwoPointLaw(0.0, 0.0, 0.0)
        for r in (0, 2, 4):
            exact = brute_force_tiny(fixed, FAMILY.LINEAR_FRACTIONAL, 4, r, 0.0)
            self.assertAlmostEqual(exact.survival(), 0.2, places=9)
        exact = brute_force_tiny(fixed, FAMILY.LINEAR_FRACTIONAL, 1, 0, 0.0)
        self.assertAlmostEqual(exact.survival(), 0.5, places=9)

    def test_state_space_limit(self):
        with self.assertRaises(StateSpaceTooLarge):
            brute_force_tiny(COIN, FAMILY.POISSON, 12, 2, 0.0)

    def test_simulator_matches_enumeration(self):
        model = EnvironmentModel(FAMILY.LINEAR_FRACTIONAL, COIN)
        scenario = ScenarioSpec(model, 4, REGIME.EXPLICIT, r=2, threshold=0.5,
                                max_trials=200000, seed=3)
        block = run_trial_block(scenario, 0, 200000)
        exact, mass = brute_force_tiny(COIN, FAMILY.LINEAR_FRACTIONAL, 4, 2,
                                       0.5).accepted()
        self.assertLess(total_variation(empirical_law(block.samples), exact), 0.02)
        rate = block.accepted / float(block.attempted)
        self.assertAlmostEqual(rate, mass, delta=4 * math.sqrt(mass / 200000))


class TrialTest(SimpleTestCase):
    def test_sample_invariants(self):
        sample = ReducedSample(0, 1.0, 2.0, 0.5, 3, 4, 0.5, 2, 1.5,
                               math.log(2) - 0.5)
        self.assertAlmostEqual(sample.recomputed_delta(), sample.Delta_rn)
        with self.assertRaises(ValueError):
            ReducedSample(0, 1.0, 2.0, 0.5, 3, 4, 0.5, 5, 1.5, 0.0)
        with self.assertRaises(ValueError):
            ReducedSample(0, 1.0, 2.0, 1.5, 3, 4, 0.5, 2, 1.5, 0.0)
        with self.assertRaises(ValueError):
            ReducedSample(0, 1.0, 2.0, 0.5, 3, 4, 1.0, 2, 1.5, 0.0)

    def test_blocks_are_reproducible(self):
        scenario = ScenarioSpec(LF_GAUSSIAN, 100, REGIME.THM1, seed=5,
                                max_trials=4000)
        first = run_trial_block(scenario, 1, 2000)
        again = run_trial_block(scenario, 1, 2000)
        self.assertEqual(first.samples, again.samples)
        self.assertEqual(first.attempted, 2000)
        self.assertTrue(all(2000 <= s.trial_index < 4000 for s in first.samples))
        self.assertEqual(run_trial_block(scenario, 2, 2000).attempted, 0)

    def test_trials_replay_alone(self):
        scenario = ScenarioSpec(LF_GAUSSIAN, 100, REGIME.THM1, t=2.0, seed=6,
                                max_trials=4000)
        block = run_trial_block(scenario, 1, 2000)
        self.assertTrue(block.samples)
        for sample in block.samples[:5]:
            self.assertEqual(replay_trial(scenario, sample.trial_index, 2000),
                             sample)
        accepted = set(s.trial_index for s in block.samples)
        rejected = next(i for i in range(2000, 4000) if i not in accepted)
        self.assertIsNone(replay_trial(scenario, rejected, 2000))

    def test_accepted_samples_meet_the_event(self):
        scenario = ScenarioSpec(LF_GAUSSIAN, 100, REGIME.THM1, t=2.0, seed=6,
                                max_trials=5000)
        block = run_trial_block(scenario, 0, 5000)
        self.assertGreater(block.accepted, 0)
        for sample in block.samples:
            self.assertLessEqual(sample.S_n, scenario.walk_threshold)
            self.assertGreaterEqual(sample.Z_rn, 1)
            self.assertTrue(scenario.r <= sample.tau_rn <= scenario.n)
            self.assertAlmostEqual(sample.recomputed_delta(), sample.Delta_rn,
                                   delta=1e-6)
            self.assertGreaterEqual(sample.O_rn, 1.0)
        self.assertEqual(block.attempted, 5000)
        self.assertLessEqual(block.accepted + block.extinct_by_r, block.walk_passed)

    def test_single_trial(self):
        scenario = ScenarioSpec(LF_GAUSSIAN, 50, REGIME.THM1, t=3.0, seed=7)
        rng = generator(7, 0)
        results = [run_conditioned_trial(scenario, rng, i) for i in range(2000)]
        accepted = [s for s in results if s is not None]
        self.assertTrue(accepted)
        self.assertTrue(all(s.Z_rn >= 1 for s in accepted))


class DiagnosticsTest(SimpleTestCase):
    def test_quantile_interval(self):
        values = generator(8, 0).uniform(size=10000)
        estimate, halfwidth = quantile_ci(values, 0.5)
        self.assertAlmostEqual(estimate, 0.5, delta=0.02)
        self.assertTrue(0 < halfwidth < 0.03)

    def test_diagnostics(self):
        scenario = ScenarioSpec(LF_GAUSSIAN, 100, REGIME.THM1, t=2.0, seed=9,
                                max_trials=100000)
        samples = run_trial_block(scenario, 0, 100000).samples
        report = diagnostics_check(samples, scenario, min_samples=50)
        self.assertLess(report.delta_mismatch, 1e-6)
        self.assertTrue(0 <= report.binomial_below_two <= 1)
        self.assertEqual(report.n, 100)
        self.assertGreater(report.delta_q95[0], 0)
        with self.assertRaises(InsufficientSamples):
            diagnostics_check(samples[:10], scenario, min_samples=50)


class ThetaTest(SimpleTestCase):
    def test_ratio_is_a_probability_ratio(self):
        value, halfwidth = ratio_estimate(LF_GAUSSIAN, 50, 5.0, 20000,
                                          generator(10, 0))
        self.assertTrue(0 < value < 10)
        self.assertGreater(halfwidth, 0)

    def test_estimate_theta(self):
        table = renewal_table(GAUSSIAN, np.linspace(0, 10, 51), 1000, 1000,
                              generator(11, 0))
        estimate = estimate_theta(
            LF_GAUSSIAN, [50, 100, 200], lambda n: schedule(REGIME.THM1, n)[0],
            1.0, generator(11, 1), table=table, n_trials=20000, max_epoch=10,
            max_size=50, horizon=50, n_paths=500)
        self.assertEqual([n for n, _, _ in estimate.ratio], [50, 100, 200])
        self.assertTrue(all(v > 0 for _, v, _ in estimate.ratio))
        self.assertGreater(estimate.series, 0)
        self.assertGreater(estimate.sparr_bound,
                           estimate.series - 4 * estimate.series_stderr)
        self.assertEqual(estimate.truncation, (10, 50))
