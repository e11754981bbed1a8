import math

import numpy as np
from scipy import stats

from apps.stats.constants import CONFIDENCE, DKW_DELTA
from reducedbpre.exceptions import InsufficientSamples


def dkw_halfwidth(n, delta=DKW_DELTA):
    """Distribution-free band: P(sup|F_n - F| > eps) <= delta."""
    return math.sqrt(math.log(2 / delta) / (2 * n))


def normal_quantile(confidence=CONFIDENCE):
    return float(stats.norm.ppf(0.5 + confidence / 2))


class Ecdf(object):
    """Right-continuous empirical distribution function."""

    def __init__(self, values, delta=DKW_DELTA):
        values = np.asarray(values, dtype=float).ravel()
        if np.any(np.isnan(values)):
            raise ValueError('sample contains NaN')
        self.values = np.sort(values)
        self.delta = delta

    def __len__(self):
        return len(self.values)

    @property
    def n(self):
        return len(self.values)

    @property
    def band(self):
        if not self.n:
            raise InsufficientSamples('empty sample has no DKW band')
        return dkw_halfwidth(self.n, self.delta)

    def __call__(self, x):
        if not self.n:
            raise InsufficientSamples('empty sample')
        index = np.searchsorted(self.values, x, side='right')
        return index / float(self.n)

    def left(self, x):
        """F(x-)."""
        if not self.n:
            raise InsufficientSamples('empty sample')
        return np.searchsorted(self.values, x, side='left') / float(self.n)

    def quantile(self, p):
        return float(np.quantile(self.values, p))


def _left_limit(reference, points):
    if isinstance(reference, Ecdf):
        return reference.left(points)
    return np.asarray(reference(np.nextafter(points, -np.inf)), dtype=float)


def ks_distance(ecdf, reference):
    """sup |F_hat - F_ref| over the jump points of both sides.

    ``reference`` is any vectorized CDF callable; another Ecdf is treated
    as a step reference and its jumps are added to the evaluation points.
    """
    if not ecdf.n:
        raise InsufficientSamples('ks distance of an empty sample')
    points = ecdf.values
    if isinstance(reference, Ecdf):
        points = np.union1d(points, reference.values)
    right = np.abs(ecdf(points) - np.asarray(reference(points), dtype=float))
    left = np.abs(ecdf.left(points) - _left_limit(reference, points))
    return float(max(right.max(), left.max()))


def mean_ci(values, weights=None, confidence=CONFIDENCE):
    """(mean, half-width) of a normal-approximation interval."""
    values = np.asarray(values, dtype=float)
    if not len(values):
        raise InsufficientSamples('mean of an empty sample')
    if weights is None:
        weights = np.full(len(values), 1.0 / len(values))
    else:
        weights = np.asarray(weights, dtype=float)
        weights = weights / weights.sum()
    mean = float(np.sum(weights * values))
    effective = 1.0 / np.sum(weights ** 2)
    spread = float(np.sum(weights * (values - mean) ** 2))
    return mean, normal_quantile(confidence) * math.sqrt(spread / effective)


def proportion_ci(hits, total, confidence=CONFIDENCE):
    if total < 1:
        raise InsufficientSamples('proportion of zero trials')
    p = hits / float(total)
    return p, normal_quantile(confidence) * math.sqrt(max(p * (1 - p), 0.0) / total)
