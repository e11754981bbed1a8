"""Monte Carlo checks of the fluctuation asymptotics of the walk."""
import logging
import math
from dataclasses import dataclass

import numpy as np

from apps.stable.laws import StableSpec, negative_tail, norming, stable_density
from apps.stats.ecdf import normal_quantile
from apps.stats.regression import geometric_abscissae, tail_index_fit
from apps.walk.constants import REGRESSION_POINTS, REPLICATES, SIDE, WALK_CHUNK
from apps.walk.conditioned import resample_ancestors, truncated_walks
from apps.walk.paths import iter_prefix_chunks

logger = logging.getLogger('walk.asymptotics')


@dataclass(frozen=True)
class EventEstimate:
    estimate: float
    stderr: float
    prediction: float = None

    @property
    def halfwidth(self):
        return normal_quantile() * self.stderr

    @property
    def ratio(self):
        if not self.prediction:
            return None
        return self.estimate / self.prediction

    @property
    def ratio_halfwidth(self):
        if not self.prediction:
            return None
        return self.halfwidth / self.prediction


def b_norming(spec, n):
    """b_n = 1 / (n a_n)."""
    return 1.0 / (n * norming(spec, n))


def event_b_prediction(spec, x, n, table, start=0.0):
    """g(0) V-(w) b_n int_0^x V+ for the event {S_n <= x, L_n >= 0}."""
    if x < 0:
        return 0.0
    return (stable_density(spec, 0.0) * float(table.v_minus_at(start)) *
            b_norming(spec, n) * table.integral(SIDE.PLUS, x))


def event_b_probability(spec, x, n, n_trials, rng, table=None):
    """P(S_n <= x, L_n >= 0) by truncated-increment importance sampling.

    Each walk carries the product of the probabilities of its truncated
    steps, so the estimator is unbiased and never rejects.
    """
    if n < 1 or n_trials < 1:
        raise ValueError('need n >= 1 and n_trials >= 1')
    prediction = event_b_prediction(spec, x, n, table) if table else None
    if x < 0:
        return EventEstimate(0.0, 0.0, prediction)

    values = []
    for start in range(0, n_trials, WALK_CHUNK):
        size = min(WALK_CHUNK, n_trials - start)
        batch = truncated_walks(spec, n, 0.0, size, rng, keep_paths=False,
                                resample=False)
        values.append(np.where(batch.endpoints <= x,
                               np.exp(batch.log_weights), 0.0))
    values = np.concatenate(values)
    estimate = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(n_trials)) if n_trials > 1 else 0.0
    logger.info('P(B(%g, %d)) = %.4g +- %.2g, prediction %s',
                x, n, estimate, stderr, prediction)
    return EventEstimate(estimate, stderr, prediction)


def first_passage_times(law, side, n_paths, horizon, rng):
    """First weak ladder epochs tau_1 capped at horizon + 1."""
    times = []
    for prefix in iter_prefix_chunks(law, horizon, n_paths, rng):
        steps = prefix[:, 1:]
        hit = steps > 0 if side == SIDE.PLUS else steps <= 0
        first = np.where(hit.any(axis=1), hit.argmax(axis=1) + 1, horizon + 1)
        times.append(first)
    return np.concatenate(times)


def ladder_tail_index(spec, side, n_paths, horizon, rng, low=10,
                      points=REGRESSION_POINTS):
    """Fitted index of P(tau_1 > n); rho for the ascending side and 1 - rho
    for the descending one."""
    times = np.sort(first_passage_times(spec, side, n_paths, horizon, rng))
    abscissae = geometric_abscissae(low, horizon, points)
    survival = 1.0 - np.searchsorted(times, abscissae, side='right') / float(n_paths)
    slope, stderr = tail_index_fit(abscissae, survival)
    logger.info('tail index of tau_1 (%s): %.3f +- %.3f', side, -slope, stderr)
    return -slope, stderr


def renewal_exponent(table, side, low=None, points=REGRESSION_POINTS):
    """Regular-variation exponent of V on the upper part of the table."""
    grid = table.grid[table.grid > 0]
    low = low or grid[len(grid) // 2]
    abscissae = np.geomspace(low, grid[-1], points)
    return tail_index_fit(abscissae, table.value(side, abscissae))


def strict_renewal(table, side):
    """(strict-ladder estimate, (1 - zeta) times the weak estimate), zeta
    being the tie probability of that side."""
    return (table.column(side, strict=True),
            (1 - table.zeta(side)) * table.column(side))


def exp_functional(spec, j_grid, n_paths, rng, replicates=REPLICATES):
    """E[e^{S_j}; M_j < 0] on ``j_grid`` with its standard error.

    The reflected walk -S is kept non-negative by truncated increments,
    so the whole grid is estimated from one set of paths. Resampling
    couples the paths of a population, so the error comes from the
    spread over independent populations.
    """
    j_grid = np.asarray(sorted(set(int(j) for j in j_grid)))
    if j_grid[0] < 0:
        raise ValueError('j must be nonnegative')
    if replicates < 2 or n_paths < replicates:
        raise ValueError('need at least two populations of one path')
    tail = negative_tail(StableSpec(spec.alpha, -spec.beta, spec.c))
    size = n_paths // replicates
    estimates = np.empty((replicates, len(j_grid)))
    for r in range(replicates):
        position = np.zeros(size)
        log_weights = np.zeros(size)
        column = 0
        for step in range(j_grid[-1] + 1):
            if step:
                log_weights += np.log(tail.upper_mass(position))
                position = position + tail.sample_above(-position, rng)
            if step == j_grid[column]:
                estimates[r, column] = np.exp(log_weights - position).mean()
                column += 1
                if column == len(j_grid):
                    break
            index, level = resample_ancestors(log_weights, rng)
            if index is not None:
                position = position[index]
                log_weights = np.full(size, level)
    means = estimates.mean(axis=0)
    errors = estimates.std(axis=0, ddof=1) / math.sqrt(replicates)
    return j_grid, means, errors


def scaled_exp_functional(spec, j_grid, n_paths, rng):
    """j^{1/alpha + 1} E[e^{S_j}; M_j < 0]; bounded in j."""
    j_grid, means, errors = exp_functional(spec, j_grid, n_paths, rng)
    scale = j_grid.astype(float) ** (1 / spec.alpha + 1)
    return j_grid, scale * means, scale * errors
