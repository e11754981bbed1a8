"""The constant Theta in P(S_n <= x, Z_n > 0) ~ Theta P(S_n <= x, L_n >= 0).

Two estimators are kept: the ratio of the two probabilities at finite n,
and the series over strict descending ladder epochs j of the population
found there, weighted by its chance to survive forever in a
P^+ environment.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from scipy import special

from apps.bpre.populations import step_generation
from apps.bpre.trials import survival_given_env
from apps.envs.environments import draw_increments
from apps.envs.generating import log_survival_backward
from apps.stable.laws import norming
from apps.stats.ecdf import normal_quantile
from apps.walk.conditioned import conditioned_sample_positive
from apps.walk.asymptotics import exp_functional
from apps.walk.constants import WALK_CHUNK
from reducedbpre.exceptions import InsufficientAcceptance

logger = logging.getLogger('bpre.theta')


@dataclass
class ThetaEstimate:
    ratio: list = field(default_factory=list)
    series: float = None
    series_stderr: float = None
    truncation: tuple = None
    truncated_events: int = 0
    sparr_bound: float = None

    def ratio_spread(self):
        """Largest relative deviation between ratio estimates."""
        values = np.array([v for _, v, _ in self.ratio])
        return float((values.max() - values.min()) / values.mean())


def ratio_estimate(model, n, threshold, n_trials, rng, chunk=WALK_CHUNK):
    """P(S_n <= x, Z_n > 0) / P(S_n <= x, L_n >= 0), survival averaged over
    the offspring given each environment; (estimate, half-width)."""
    top, bottom = [], []
    for start in range(0, n_trials, chunk):
        size = min(chunk, n_trials - start)
        increments, safe = draw_increments(model, n, size, rng)
        increments = increments[safe]
        prefix = np.cumsum(increments, axis=1)
        low = prefix[:, -1] <= threshold
        top.append(np.where(low, survival_given_env(model.family, increments), 0.0))
        bottom.append((low & (prefix.min(axis=1) >= 0)).astype(float))
    top, bottom = np.concatenate(top), np.concatenate(bottom)
    if not bottom.sum():
        raise InsufficientAcceptance(
            'no walk of length %d met {S_n <= %g, L_n >= 0}' % (n, threshold),
            0, len(bottom))
    estimate = top.mean() / bottom.mean()
    # delta method for a ratio of means
    residual = top - estimate * bottom
    stderr = residual.std(ddof=1) / (bottom.mean() * math.sqrt(len(bottom)))
    return float(estimate), float(normal_quantile() * stderr)


def survival_forever(spec, family, table, horizon, n_paths, max_size, rng):
    """h(i) = P^+_0(survival | Z_0 = i), i = 1..max_size, from environments
    drawn under P^+ on ``horizon`` generations."""
    batch = conditioned_sample_positive(spec, horizon, 0.0, rng, table=table,
                                        n_paths=n_paths, extrapolate=True)
    increments = np.diff(batch.prefixes, axis=1)
    log_surv = log_survival_backward(family, increments)
    log_extinct = np.log1p(-np.minimum(np.exp(log_surv), 1.0 - 1e-16))
    sizes = np.arange(1, max_size + 1)[:, None]
    return np.mean(-np.expm1(sizes * log_extinct[None, :]), axis=1)


def series_estimate(model, h, max_epoch, n_trials, rng):
    """sum_{j <= J} E[h(Z_j); tau_j = j, 1 <= Z_j <= K] with K = len(h).

    tau_j = j means S_j is a strict running minimum; j = 0 always counts.
    Returns (estimate, stderr, number of ladder epochs with Z_j > K).
    """
    max_size = len(h)
    increments, safe = draw_increments(model, max_epoch, n_trials, rng)
    increments = increments[safe]
    size = len(increments)
    prefix = np.concatenate([np.zeros((size, 1)), np.cumsum(increments, axis=1)],
                            axis=1)
    running = np.minimum.accumulate(prefix, axis=1)

    totals = np.zeros(size)
    truncated = 0
    z = np.ones(size, dtype=np.int64)
    for j in range(max_epoch + 1):
        if j:
            z = step_generation(model.family, increments[:, j - 1], z, rng)
            epoch = prefix[:, j] < running[:, j - 1]
        else:
            epoch = np.ones(size, dtype=bool)
        counted = epoch & (z >= 1) & (z <= max_size)
        truncated += int((epoch & (z > max_size)).sum())
        totals[counted] += h[z[counted] - 1]
    stderr = totals.std(ddof=1) / math.sqrt(size)
    return float(totals.mean()), float(stderr), truncated


def sparr_bound(spec, max_epoch, n_paths, rng):
    """sum_j E[e^{S_j}; M_j < 0]: terms j <= J by simulation, the rest from
    the j^{-(1/alpha + 1)} decay matched at J."""
    j_grid, means, _ = exp_functional(spec, range(max_epoch + 1), n_paths, rng)
    power = 1 / spec.alpha + 1
    tail = means[-1] * max_epoch ** power * special.zeta(power, max_epoch + 1)
    return float(means.sum() + tail)


def estimate_theta(model, n_grid, k_schedule, t, rng, table=None,
                   n_trials=None, max_epoch=None, max_size=None, horizon=None,
                   n_paths=2000, series=True):
    """Ratio estimates over ``n_grid``, and with ``series`` the truncated
    series and its upper bound. ``k_schedule`` maps n to k."""
    config = settings.REDUCED_BPRE
    n_trials = n_trials or config['TRIALS']
    max_epoch = max_epoch or config['THETA_J']
    max_size = max_size or config['THETA_K']
    horizon = horizon or config['THETA_HORIZON']
    spec = model.increment_law

    result = ThetaEstimate(truncation=(max_epoch, max_size))
    for n in n_grid:
        threshold = t * norming(spec, k_schedule(n))
        value, halfwidth = ratio_estimate(model, n, threshold, n_trials, rng)
        logger.info('Theta ratio at n=%d: %.4f +- %.4f', n, value, halfwidth)
        result.ratio.append((n, value, halfwidth))

    if series:
        if table is None:
            raise ValueError('the series estimator needs a renewal table')
        h = survival_forever(spec, model.family, table, horizon, n_paths,
                             max_size, rng)
        result.series, result.series_stderr, result.truncated_events = \
            series_estimate(model, h, max_epoch, n_trials, rng)
        result.sparr_bound = sparr_bound(spec, max_epoch, n_paths, rng)
        if result.truncated_events:
            logger.warning('%d ladder epochs had Z_j > %d',
                           result.truncated_events, max_size)
        logger.info('Theta series %.4f +- %.4f, bound %.4f', result.series,
                    result.series_stderr, result.sparr_bound)
    return result
