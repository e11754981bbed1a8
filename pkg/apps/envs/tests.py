import math

import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from apps.envs.constants import FAMILY
from apps.envs.environments import (
    EnvironmentModel, EnvRealization, TwoPointLaw, draw_environment,
    draw_increments, offspring_parameters
)
from apps.envs.generating import (
    draw_offspring, extinction_backward, gf_derivatives, gf_eval,
    log_survival_backward, log_survival_closed_form, log_survival_lower_bound,
    log_survival_profile, second_factorial_ratio, survival_closed_form_lf,
    survival_lower_bound, transition_law
)
from apps.stable.laws import StableSpec
from apps.stable.rngs import generator
from reducedbpre.exceptions import FamilyMismatch, ParameterOverflow

FAMILIES = (FAMILY.LINEAR_FRACTIONAL, FAMILY.POISSON)


def composed_survival(family, increments):
    """1 - F_1(F_2(...F_n(0))) by direct composition."""
    s = 0.0
    for parameter in offspring_parameters(family, increments)[::-1]:
        s = float(gf_eval(family, parameter, s))
    return 1.0 - s


class EnvironmentTest(SimpleTestCase):
    def test_two_point_law(self):
        law = TwoPointLaw(-1.0, 1.0, 0.25)
        self.assertEqual(law.probabilities, (0.75, 0.25))
        draws = law.sample(generator(1, 0), 40000)
        self.assertTrue(set(np.unique(draws)) <= {-1.0, 1.0})
        self.assertAlmostEqual(np.mean(draws == 1.0), 0.25, delta=0.01)
        with self.assertRaises(ValueError):
            TwoPointLaw(1.0, -1.0)
        with self.assertRaises(ValueError):
            TwoPointLaw(-1.0, 1.0, 1.5)

    def test_model(self):
        model = EnvironmentModel(FAMILY.POISSON, StableSpec(2.0))
        self.assertEqual(model.eta, 1.0)
        with self.assertRaises(ValueError):
            EnvironmentModel('binomial', StableSpec(2.0))

    def test_realization(self):
        env = EnvRealization(FAMILY.LINEAR_FRACTIONAL, [0.0, math.log(3)])
        np.testing.assert_allclose(env.prefix, [0.0, 0.0, math.log(3)])
        np.testing.assert_allclose(env.parameters, [0.5, 0.75])
        np.testing.assert_allclose(env.mean_offspring, [1.0, 3.0])
        self.assertEqual(env.eta, 2.0)

    def test_overflow(self):
        model = EnvironmentModel(FAMILY.POISSON, TwoPointLaw(-800.0, 800.0))
        with self.assertRaises(ParameterOverflow):
            draw_environment(model, 20, generator(2, 0))
        increments, safe = draw_increments(model, 1, 100, generator(2, 1))
        self.assertFalse(safe.any())
        safe_model = EnvironmentModel(FAMILY.POISSON, TwoPointLaw(-1.0, 1.0))
        self.assertTrue(draw_increments(safe_model, 5, 10, generator(2, 2))[1].all())


class GeneratingFunctionTest(SimpleTestCase):
    def test_moments(self):
        for family in FAMILIES:
            parameter = offspring_parameters(family, 0.4)
            self.assertAlmostEqual(float(gf_eval(family, parameter, 1.0)), 1.0)
            first, _ = gf_derivatives(family, parameter)
            self.assertAlmostEqual(float(first), math.exp(0.4))
            self.assertAlmostEqual(float(second_factorial_ratio(family, parameter)),
                                   FAMILY.ETA[family])
            self.assertAlmostEqual(transition_law(family, parameter, 3).mean(),
                                   3 * math.exp(0.4))

    def test_unit_interval(self):
        with self.assertRaises(ValueError):
            gf_eval(FAMILY.POISSON, 1.0, 1.5)

    def test_offspring_draws(self):
        rng = generator(3, 0)
        for family in FAMILIES:
            parameter = offspring_parameters(family, 0.0)
            z = np.full(20000, 5)
            children = draw_offspring(family, parameter, z, rng)
            self.assertAlmostEqual(children.mean(), 5.0, delta=0.15)
            np.testing.assert_array_equal(
                draw_offspring(family, parameter, np.zeros(10, dtype=int), rng), 0)

    def test_critical_geometric_offspring(self):
        # X = 0: P(k children) = (1/2)^(k+1) on {0, 1, ...}
        size = 100000
        parameter = offspring_parameters(FAMILY.LINEAR_FRACTIONAL, 0.0)
        children = draw_offspring(FAMILY.LINEAR_FRACTIONAL, parameter,
                                  np.ones(size, dtype=int), generator(3, 1))
        cells = np.minimum(children, 10)
        observed = np.bincount(cells, minlength=11)
        pmf = 0.5 ** (np.arange(10) + 1)
        expected = np.append(pmf, 1 - pmf.sum()) * size
        self.assertGreater(stats.chisquare(observed, expected).pvalue, 1e-3)


class SurvivalTest(SimpleTestCase):
    def setUp(self):
        self.increments = generator(4, 0).normal(0.0, 1.0, 12)

    def test_backward_matches_composition(self):
        for family in FAMILIES:
            log_survival = log_survival_backward(family, self.increments)
            self.assertAlmostEqual(
                math.exp(float(log_survival)),
                composed_survival(family, self.increments), places=10)

    def test_linear_fractional_closed_form(self):
        backward = log_survival_backward(FAMILY.LINEAR_FRACTIONAL, self.increments)
        closed = log_survival_closed_form(self.increments)
        self.assertAlmostEqual(float(backward), float(closed), places=10)
        env = EnvRealization(FAMILY.POISSON, self.increments)
        with self.assertRaises(FamilyMismatch):
            survival_closed_form_lf(env, 0, 12)

    def test_lower_bound(self):
        for family in FAMILIES:
            env = EnvRealization(family, self.increments)
            for r in (0, 4, 11):
                q, log_survival = extinction_backward(env, r, 12)
                self.assertLessEqual(survival_lower_bound(env, r, 12),
                                     math.exp(log_survival) * (1 + 1e-12))
                self.assertAlmostEqual(q, 1 - math.exp(log_survival))
        lf = EnvRealization(FAMILY.LINEAR_FRACTIONAL, self.increments)
        self.assertLess(survival_lower_bound(lf, 0, 12),
                        survival_closed_form_lf(lf, 0, 12))

    def test_deep_environment_does_not_underflow(self):
        increments = np.full(40, -30.0)
        for family in FAMILIES:
            log_survival = float(log_survival_backward(family, increments))
            self.assertTrue(np.isfinite(log_survival))
            self.assertLess(log_survival, -30.0 * 39)
        self.assertAlmostEqual(
            float(log_survival_backward(FAMILY.POISSON, [-30.0])), -30.0, places=6)

    def test_vectorized_rows(self):
        rows = generator(5, 0).normal(0.0, 1.0, (4, 6))
        together = log_survival_backward(FAMILY.POISSON, rows)
        one_by_one = [float(log_survival_backward(FAMILY.POISSON, row)) for row in rows]
        np.testing.assert_allclose(together, one_by_one)
        bounds = log_survival_lower_bound(rows, 1.0)
        self.assertTrue(np.all(bounds <= together + 1e-12))

    def test_profile(self):
        env = EnvRealization(FAMILY.LINEAR_FRACTIONAL, self.increments)
        profile = log_survival_profile(env.family, env.increments)
        self.assertEqual(profile[-1], 0.0)
        for r in (0, 5, 11):
            self.assertAlmostEqual(profile[r], extinction_backward(env, r, 12)[1])
        self.assertEqual(extinction_backward(env, 12, 12), (0.0, 0.0))
        with self.assertRaises(ValueError):
            extinction_backward(env, 5, 13)
