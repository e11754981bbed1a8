"""Generating functions of the offspring laws and their compositions.

Survival probabilities of the composed maps F_{r,n}(0) are carried as
logarithms, so that survival of order e^{min S} does not underflow.
"""
import numpy as np
from scipy import special, stats

from apps.envs.constants import FAMILY, POISSON_SERIES_CUTOFF
from reducedbpre.exceptions import FamilyMismatch


def _check_unit(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(s > 1):
        raise ValueError('generating functions are evaluated on [0, 1]')
    return s


def gf_eval(family, parameter, s):
    """F(s): q / (1 - p s) for geometric p, e^{lambda (s - 1)} for Poisson."""
    s = _check_unit(s)
    if family == FAMILY.POISSON:
        return np.exp(parameter * (s - 1))
    p = np.asarray(parameter, dtype=float)
    return (1 - p) / (1 - p * s)


def gf_derivatives(family, parameter, s=1.0):
    """(F'(s), F''(s))."""
    s = _check_unit(s)
    if family == FAMILY.POISSON:
        value = np.exp(parameter * (s - 1))
        return parameter * value, parameter ** 2 * value
    p = np.asarray(parameter, dtype=float)
    q = 1 - p
    return q * p / (1 - p * s) ** 2, 2 * q * p ** 2 / (1 - p * s) ** 3


def second_factorial_ratio(family, parameter):
    """F''(1) / F'(1)^2."""
    first, second = gf_derivatives(family, parameter)
    return second / first ** 2


def transition_law(family, parameter, z):
    """Law of the sum of ``z`` independent offspring counts."""
    if family == FAMILY.POISSON:
        return stats.poisson(z * parameter)
    return stats.nbinom(z, 1 - parameter)


def draw_offspring(family, parameters, z, rng):
    """Next generation sizes for populations ``z`` under ``parameters``."""
    z = np.asarray(z, dtype=np.int64)
    if family == FAMILY.POISSON:
        # means past 1e18 are capped; such populations overflow anyway
        return rng.poisson(np.minimum(z * parameters, 1e18))
    out = np.zeros_like(z)
    alive = z > 0
    success = np.broadcast_to(1 - np.asarray(parameters, dtype=float), z.shape)
    out[alive] = rng.negative_binomial(z[alive], success[alive])
    return out


def _survival_step(family, increment, log_survival):
    """log(1 - F(1 - e^{log_survival})) for a law with log-mean ``increment``."""
    log_mean = increment + log_survival
    if family == FAMILY.LINEAR_FRACTIONAL:
        # m s / (1 + m s)
        return -np.logaddexp(0.0, -log_mean)
    # 1 - exp(-m s)
    small = log_mean < np.log(POISSON_SERIES_CUTOFF)
    y = np.exp(np.where(small, 0.0, log_mean))
    exact = np.log(-np.expm1(-y))
    series = log_mean - 0.5 * np.exp(log_mean)
    return np.where(small, series, exact)


def log_survival_backward(family, increments, log_start=0.0):
    """log(1 - F_1(F_2(...F_m(s)))) for s = 1 - e^{log_start}.

    ``increments`` holds X_1..X_m along the last axis; leading axes are
    independent environments.
    """
    increments = np.asarray(increments, dtype=float)
    log_survival = np.broadcast_to(
        np.asarray(log_start, dtype=float), increments.shape[:-1]).copy()
    for j in range(increments.shape[-1] - 1, -1, -1):
        log_survival = _survival_step(family, increments[..., j], log_survival)
    return log_survival


def log_survival_profile(family, increments):
    """log(1 - F_{r,n}(0)) for every r = 0..n of one environment."""
    increments = np.asarray(increments, dtype=float)
    n = len(increments)
    profile = np.zeros(n + 1)
    for r in range(n - 1, -1, -1):
        profile[r] = _survival_step(family, increments[r], profile[r + 1])
    return profile


def _window(env, r, n):
    if not 0 <= r <= n <= env.n:
        raise ValueError('need 0 <= r <= n <= %d, got r=%s, n=%s' % (env.n, r, n))
    return env.increments[r:n]


def extinction_backward(env, r, n):
    """(q, log_survival) with q = F_{r,n}(0); r = n gives (0, 0)."""
    log_survival = float(log_survival_backward(env.family, _window(env, r, n)))
    return float(-np.expm1(log_survival)), log_survival


def log_survival_closed_form(increments):
    """Linear-fractional survival -log sum_j e^{S_r - S_j}, rows of X_{r+1..n}."""
    increments = np.asarray(increments, dtype=float)
    partial = np.cumsum(increments, axis=-1)
    zero = np.zeros(increments.shape[:-1] + (1,))
    offsets = np.concatenate([zero, -partial], axis=-1)
    return -special.logsumexp(offsets, axis=-1)


def survival_closed_form_lf(env, r, n):
    if env.family != FAMILY.LINEAR_FRACTIONAL:
        raise FamilyMismatch('closed form holds for linear-fractional laws only')
    return float(np.exp(log_survival_closed_form(_window(env, r, n))))


def log_survival_lower_bound(increments, eta):
    """-log(e^{-(S_n - S_r)} + sum_{q=r}^{n-1} eta e^{-(S_q - S_r)})."""
    increments = np.asarray(increments, dtype=float)
    partial = np.cumsum(increments, axis=-1)
    zero = np.zeros(increments.shape[:-1] + (1,))
    before = np.concatenate([zero, -partial[..., :-1]], axis=-1)
    terms = np.concatenate(
        [before + np.log(eta), -partial[..., -1:]], axis=-1)
    return -special.logsumexp(terms, axis=-1)


def survival_lower_bound(env, r, n):
    window = _window(env, r, n)
    if not len(window):
        return 1.0
    return float(np.exp(log_survival_lower_bound(window, env.eta)))
