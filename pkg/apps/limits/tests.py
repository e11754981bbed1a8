import math

import numpy as np
from django.test import SimpleTestCase
from scipy import special

from apps.bpre.constants import REGIME
from apps.limits.constants import LAW
from apps.limits.laws import (
    MeanderTable, a2_limit, a_limit, cstar_and_h, meander_min_after, q_min,
    shared_ensemble, tail_closed_form, theorem_reference, w_limit
)
from apps.limits.tables import LimitLawTable, tabulate
from apps.stable.laws import StableSpec
from apps.stable.rngs import generator
from reducedbpre.exceptions import BudgetExhausted

GAUSSIAN = StableSpec(2.0)


def rayleigh_table(points=241):
    z = np.linspace(0.0, 8.0, points)
    return MeanderTable(z, z * np.exp(-z ** 2 / 2), GAUSSIAN.alpha_one_minus_rho)


class TableTest(SimpleTestCase):
    def test_values_must_not_decrease(self):
        with self.assertRaises(ValueError):
            LimitLawTable(LAW.A, [0.0, 1.0], [0.5, 0.2], 0.0)
        with self.assertRaises(ValueError):
            LimitLawTable(LAW.A, [1.0, 0.0], [0.2, 0.5], 0.0)

    def test_noise_within_error_is_kept_and_clipped(self):
        table = LimitLawTable(LAW.A, [0.0, 1.0, 2.0], [0.0, 1.01, 1.0], 0.02)
        np.testing.assert_array_equal(table.values, [0.0, 1.0, 1.0])
        self.assertEqual(table(5.0), 1.0)
        self.assertEqual(table(0.5), 0.5)

    def test_rows(self):
        table = tabulate(LAW.TAIL_CLOSED, lambda y: (y / 2, 0.0), [0.0, 1.0, 2.0], 2.0)
        rows = list(table.rows())
        self.assertEqual(rows[1], {'law_id': LAW.TAIL_CLOSED, 'arg1': 1.0,
                                   'arg2': 2.0, 'value': 0.5, 'error': 0.0})


class MinimumLawTest(SimpleTestCase):
    def test_gaussian_is_exact(self):
        for z in (-3.0, -1.0, 0.0):
            value, error = q_min(GAUSSIAN, z)
            self.assertAlmostEqual(value, 2 * special.ndtr(z))
            self.assertEqual(error, 0.0)
        with self.assertRaises(ValueError):
            q_min(GAUSSIAN, 0.5)

    def test_non_gaussian_needs_paths(self):
        spec = StableSpec(1.5)
        with self.assertRaises(BudgetExhausted):
            q_min(spec, -1.0)
        ensemble = shared_ensemble(spec, generator(1, 0), n_paths=5000,
                                   grid_size=200)
        low, _ = q_min(spec, -2.0, ensemble)
        high, error = q_min(spec, -0.5, ensemble)
        self.assertLess(low, high)
        self.assertAlmostEqual(q_min(spec, 0.0, ensemble)[0], 1.0)
        self.assertGreater(error, 0)


class ALawTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super(ALawTest, cls).setUpClass()
        cls.ensemble = shared_ensemble(GAUSSIAN, generator(2, 0), n_paths=20000,
                                       grid_size=1000)

    def test_proper_at_three_scales(self):
        for T in (0.5, 1.0, 2.0):
            value, error = a_limit(GAUSSIAN, T, T, self.ensemble)
            self.assertAlmostEqual(value, 1.0, delta=0.03 + error)

    def test_zero_at_origin(self):
        self.assertEqual(a_limit(GAUSSIAN, 1.0, 0.0, self.ensemble)[0], 0.0)
        with self.assertRaises(ValueError):
            a_limit(GAUSSIAN, 1.0, 1.5, self.ensemble)

    def test_theorem_reference_scaling(self):
        scale = 2.0 ** 0.5
        table = theorem_reference(REGIME.THM2, GAUSSIAN, t=1.0, theta=2.0,
                                  ensemble=self.ensemble, grid=[0.25, 0.5, 1.0])
        for y, value in zip(table.grid, table.values):
            direct, _ = a_limit(GAUSSIAN, scale, scale * y, self.ensemble)
            self.assertAlmostEqual(value, min(direct, 1.0), places=12)
        self.assertEqual(table.parameter, scale)

    def test_a2_limits(self):
        self.assertEqual(a2_limit(GAUSSIAN, 1.0, 1.0, -1.0, self.ensemble), (0.0, 0.0))
        with self.assertRaises(ValueError):
            a2_limit(GAUSSIAN, 1.0, 1.0, -2.0, self.ensemble)
        far, _ = a2_limit(GAUSSIAN, 1.0, 2.0, np.inf, self.ensemble)
        scale = 2.0 ** 0.5
        direct, _ = a_limit(GAUSSIAN, scale, scale, self.ensemble)
        self.assertAlmostEqual(far, direct, places=12)
        near, _ = a2_limit(GAUSSIAN, 1.0, 2.0, 0.0, self.ensemble)
        self.assertLess(near, far)


class MeanderLawTest(SimpleTestCase):
    def test_cstar_rayleigh(self):
        cstar, total = cstar_and_h(rayleigh_table(), 8.0)
        self.assertAlmostEqual(cstar, math.sqrt(2 / math.pi), delta=0.01)
        self.assertAlmostEqual(total, 1.0, places=12)
        self.assertEqual(cstar_and_h(rayleigh_table(), 0.0)[1], 0.0)
        with self.assertRaises(ValueError):
            cstar_and_h(rayleigh_table(), -1.0)

    def test_w_limit(self):
        table = rayleigh_table()
        value, error = w_limit(GAUSSIAN, 1.0, 1.0, table)
        self.assertAlmostEqual(value, 1.0, delta=0.05)
        self.assertEqual(w_limit(GAUSSIAN, 1.0, 0.0, table)[0], 0.0)
        middle, _ = w_limit(GAUSSIAN, 1.0, 0.5, table)
        self.assertTrue(0 < middle < value)
        with self.assertRaises(ValueError):
            w_limit(GAUSSIAN, 1.0, 0.5, None)

    def test_tail_closed_form(self):
        self.assertEqual(tail_closed_form(1.0, 0.0, 1.0), 0.0)
        self.assertEqual(tail_closed_form(1.0, 1.0, 1.0), 1.0)
        self.assertAlmostEqual(tail_closed_form(2.0, 1.0, 1.0), 0.75)
        self.assertEqual(tail_closed_form(1.0, -1.0, 1.0), 0.0)

    def test_min_after(self):
        with self.assertRaises(ValueError):
            meander_min_after(StableSpec(1.5), 0.5, 1.0, 100, generator(3, 0))
        values, error = meander_min_after(GAUSSIAN, 0.5, [0.1, 0.5, 1.0, 3.0],
                                          2000, generator(3, 1), walk_length=200)
        self.assertTrue(np.all(np.diff(values) >= 0))
        self.assertAlmostEqual(values[-1], 1.0, delta=0.02 + error)
