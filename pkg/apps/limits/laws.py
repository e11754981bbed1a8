"""Limit distributions of the normalized reduced process.

Joint probabilities of (min Y, Y_1) come from one shared path ensemble.
The w-integrals of A and A2 are done exactly for every simulated path,
since for a fixed path the integrand is w^{alpha rho} on an interval.
"""
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy import integrate, special

from apps.bpre.constants import REGIME
from apps.limits.constants import LAW, MIN_EFFECTIVE_PATHS
from apps.limits.tables import LimitLawTable, tabulate
from apps.stable.laws import norming
from apps.stable.paths import min_and_endpoint_sampler
from apps.stats.ecdf import dkw_halfwidth, normal_quantile
from apps.walk.conditioned import stay_nonnegative
from apps.walk.constants import METHOD
from reducedbpre.exceptions import BudgetExhausted, QuadratureError

logger = logging.getLogger('limits.laws')


def _exact_gaussian(spec):
    return spec.is_gaussian and spec.c == 0.5


def _checked(ensemble):
    if ensemble.effective_size < MIN_EFFECTIVE_PATHS:
        raise BudgetExhausted('path ensemble of effective size %.0f is too small'
                              % ensemble.effective_size)
    return ensemble


def shared_ensemble(spec, rng, n_paths=None, grid_size=None):
    config = settings.REDUCED_BPRE
    return _checked(min_and_endpoint_sampler(
        spec, grid_size or config['TIME_STEPS'], n_paths or config['PATHS'], rng))


def q_min(spec, z, ensemble=None):
    """P(min_{[0,1]} Y <= z) for z <= 0 as (value, error)."""
    if z > 0:
        raise ValueError('q_min is defined for z <= 0')
    if _exact_gaussian(spec):
        return float(2 * special.ndtr(z)), 0.0
    if ensemble is None:
        raise BudgetExhausted('no path ensemble for a non-Gaussian law')
    _checked(ensemble)
    return ensemble.probability(min_high=z), ensemble.error()


def _interval_power(lo, hi, power):
    """(hi^power - lo^power) where hi > lo >= 0, else 0."""
    lo = np.maximum(lo, 0.0)
    hi = np.maximum(hi, lo)
    return hi ** power - lo ** power


def a_limit(spec, T, y, ensemble):
    """A(T, y) as (value, error); 0 <= y <= T."""
    if not T > 0 or not 0 <= y <= T:
        raise ValueError('A(T, y) needs T > 0 and 0 <= y <= T')
    _checked(ensemble)
    power = spec.alpha_rho + 1
    m, e = ensemble.minima, ensemble.endpoints
    values = _interval_power(-m, np.minimum(y - m, T - e), power) / T ** power
    value, stderr = ensemble.mean(values)
    return value, normal_quantile() * stderr


def a2_limit(spec, t, theta, z, ensemble):
    """A2(t, theta, z) as (value, error); z = inf gives A(t', t') with
    t' = t theta^{1/alpha}."""
    if not t > 0 or not theta > 0:
        raise ValueError('A2 needs t > 0 and theta > 0')
    if not z > -t:
        if z == -t:
            return 0.0, 0.0
        raise ValueError('A2 needs z > -t')
    _checked(ensemble)
    power = spec.alpha_rho + 1
    scale = theta ** (1 / spec.alpha)
    m, e = ensemble.minima, ensemble.endpoints
    hi = np.minimum(t + z, t - e / scale)
    inside = e >= -z * scale
    values = np.where(inside, _interval_power(-m / scale, hi, power), 0.0) / t ** power
    value, stderr = ensemble.mean(values)
    return value, normal_quantile() * stderr


@dataclass(frozen=True)
class MeanderTable:
    """Time-one meander density g+ on a grid."""
    z: np.ndarray
    density: np.ndarray
    exponent: float

    def __post_init__(self):
        if len(self.z) != len(self.density) or len(self.z) < 2:
            raise ValueError('meander table needs matching z and density')

    @property
    def cstar(self):
        return 1.0 / integrate.trapezoid(self.density * self.z ** self.exponent, self.z)

    def density_at(self, z):
        return np.interp(z, self.z, self.density, left=0.0, right=0.0)


def cstar_and_h(table, y):
    """(C**, C** H(y)) from the meander table on its own nodes."""
    if table is None:
        raise ValueError('C** needs a meander density table')
    if y < 0:
        raise ValueError('H(y) is defined for y >= 0')
    z, g, b = table.z, table.density, table.exponent
    h = integrate.trapezoid(g * (z ** b - (z - np.minimum(y, z)) ** b), z)
    cstar = table.cstar
    return cstar, cstar * h


def _quad(func, lo, hi, limit):
    if hi <= lo:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            return integrate.quad(func, lo, hi, limit=limit)
        except integrate.IntegrationWarning as e:
            raise QuadratureError(str(e))


def w_limit(spec, t, y, table, limit=None):
    """W(t, y) as (value, error) by nested quadrature over the meander table.

    The second summand's q^{b-1} endpoint is removed by q = u^{1/b}, with
    b = alpha (1 - rho); the bases t - z + q are taken at their positive part.
    """
    if not t > 0 or not 0 <= y <= t:
        raise ValueError('W(t, y) needs t > 0 and 0 <= y <= t')
    if table is None:
        raise ValueError('W needs a meander density table')
    limit = limit or settings.REDUCED_BPRE['QUAD_LIMIT']
    a, b = spec.alpha_rho, spec.alpha_one_minus_rho
    first_inner, second_inner, error = [], [], 0.0
    for z in table.z:
        lo = max(z - y, 0.0, z - t)
        value, err = _quad(lambda q: q ** a * (t - z + q) ** b, lo, z, limit)
        first_inner.append(value)
        error += err
        value, err = _quad(lambda u: max(t - z + u ** (1 / b), 0.0) ** (a + 1),
                           max(z - y, 0.0) ** b, z ** b, limit)
        second_inner.append(value)
        error += err
    g = table.density
    first = integrate.trapezoid(g * np.array(first_inner), table.z)
    second = integrate.trapezoid(g * np.array(second_inner), table.z)
    cstar = table.cstar
    value = cstar * ((a + 1) * first + second) / t ** (a + 1)
    return float(value), float(cstar * error * (a + 2) / t ** (a + 1))


def tail_closed_form(t, y, alpha_rho):
    """1 - (1 - (t ^ y) / t)^{alpha rho + 1}."""
    if not t > 0:
        raise ValueError('t must be positive')
    if y < 0:
        return 0.0
    return 1.0 - (1.0 - min(t, y) / t) ** (alpha_rho + 1)


def meander_min_after(spec, s, x, n_paths, rng, walk_length=None,
                      method=METHOD.H_TRANSFORM):
    """P(inf_{s <= q <= 1} B+_q <= x) from rescaled conditioned walks, with
    its DKW error; ``x`` may be an array."""
    if not spec.is_gaussian:
        raise ValueError('the meander cross-check is for alpha = 2')
    if not 0 <= s <= 1:
        raise ValueError('s must lie in [0, 1]')
    walk_length = walk_length or settings.REDUCED_BPRE['TIME_STEPS']
    start = int(math.ceil(s * walk_length))
    batch = stay_nonnegative(spec, walk_length, 0.0, n_paths, rng, method,
                             keep_paths=False, track_from=start)
    lows = batch.min_after / (norming(spec, walk_length) * spec.sigma * math.sqrt(2))
    weights = batch.weights
    x = np.asarray(x, dtype=float)
    values = np.array([np.sum(weights[lows <= v]) for v in np.atleast_1d(x)])
    error = dkw_halfwidth(batch.effective_size)
    if x.ndim == 0:
        return float(values[0]), error
    return values, error


def theorem_reference(regime, spec, t=1.0, theta=1.0, ensemble=None,
                      meander=None, grid=None, meander_s=0.5, rng=None,
                      n_paths=None):
    """The limit CDF a regime's observable is compared against, tabulated."""
    points = settings.REDUCED_BPRE['LAW_GRID_POINTS']
    scale = theta ** (1 / spec.alpha)
    if regime == REGIME.THM1:
        grid = np.linspace(-3.0, 0.0, points) if grid is None else grid
        return tabulate(LAW.Q_MIN, lambda z: q_min(spec, min(z, 0.0), ensemble), grid)
    if regime == REGIME.THM2:
        grid = np.linspace(0.0, t, points) if grid is None else grid
        return tabulate(LAW.A, lambda y: a_limit(
            spec, scale * t, scale * min(t, y), ensemble), grid, scale * t)
    if regime == REGIME.THM3_K_GG_R:
        grid = np.linspace(0.0, meander.z[-1], points) if grid is None else grid
        return tabulate(LAW.H_CSTAR, lambda y: (cstar_and_h(meander, y)[1], 0.0), grid)
    if regime == REGIME.THM3_THETA_R:
        grid = np.linspace(0.0, scale * t, points) if grid is None else grid
        return tabulate(LAW.W, lambda y: w_limit(
            spec, scale * t, min(scale * t, y), meander), grid, scale * t)
    if regime == REGIME.THM3_MIN_GG_K:
        grid = np.linspace(0.0, t, points) if grid is None else grid
        return tabulate(LAW.TAIL_CLOSED,
                        lambda y: (tail_closed_form(t, y, spec.alpha_rho), 0.0), grid, t)
    if regime == REGIME.MEANDER:
        grid = np.linspace(0.0, 3.0, points) if grid is None else grid
        n_paths = n_paths or settings.REDUCED_BPRE['PATHS']
        values, error = meander_min_after(spec, meander_s, grid, n_paths, rng)
        return LimitLawTable(LAW.MEANDER_MIN_AFTER, grid, values, error, meander_s)
    raise ValueError('regime %r has no limit law' % regime)
