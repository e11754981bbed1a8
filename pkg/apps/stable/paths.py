import logging
import math
from dataclasses import dataclass

import numpy as np

from apps.stable.constants import DEFAULT_GRID_SIZE, PATH_CHUNK
from apps.stable.laws import sample_increment
from apps.stats.ecdf import dkw_halfwidth

logger = logging.getLogger('stable.paths')


@dataclass(frozen=True)
class StablePath:
    grid_size: int
    values: np.ndarray

    def __post_init__(self):
        if self.grid_size < 1:
            raise ValueError('grid_size must be positive')
        if len(self.values) != self.grid_size + 1 or self.values[0] != 0:
            raise ValueError('path must hold grid_size + 1 values from 0')

    @property
    def minimum(self):
        return float(self.values.min())

    @property
    def endpoint(self):
        return float(self.values[-1])


def sample_path(spec, grid_size, rng):
    """Y(j / grid_size), j = 0..grid_size, from scaled partial sums."""
    if grid_size < 1:
        raise ValueError('grid_size must be positive')
    steps = sample_increment(spec, rng, grid_size) * grid_size ** (-1 / spec.alpha)
    values = np.concatenate([[0.0], np.cumsum(steps)])
    return StablePath(grid_size, values)


class PathEnsemble(object):
    """Joint sample of (min over [0,1] of Y, Y(1)), optionally weighted.

    Evaluators share one ensemble so that probabilities computed at
    different arguments use common random numbers.
    """
    def __init__(self, spec, minima, endpoints, weights=None, grid_size=None):
        self.spec = spec
        self.minima = np.asarray(minima, dtype=float)
        self.endpoints = np.asarray(endpoints, dtype=float)
        if weights is None:
            weights = np.ones_like(self.minima)
        weights = np.asarray(weights, dtype=float)
        self.weights = weights / weights.sum()
        self.grid_size = grid_size

    def __len__(self):
        return len(self.minima)

    @property
    def effective_size(self):
        return 1.0 / np.sum(self.weights ** 2)

    def probability(self, min_low=-np.inf, min_high=np.inf, end_high=np.inf,
                    end_low=-np.inf):
        """P(min_low <= min <= min_high, end_low <= Y(1) <= end_high)."""
        hit = (
            (self.minima >= min_low) & (self.minima <= min_high) &
            (self.endpoints >= end_low) & (self.endpoints <= end_high)
        )
        return float(np.sum(self.weights[hit]))

    def error(self, delta=0.01):
        return dkw_halfwidth(self.effective_size, delta)

    def mean(self, values):
        values = np.asarray(values, dtype=float)
        estimate = float(np.sum(self.weights * values))
        spread = float(np.sum(self.weights * (values - estimate) ** 2))
        return estimate, math.sqrt(spread / self.effective_size)


def min_and_endpoint_sampler(spec, grid_size=DEFAULT_GRID_SIZE, n_paths=100000,
                             rng=None, chunk=PATH_CHUNK):
    if n_paths < 1:
        raise ValueError('n_paths must be positive')
    scale = grid_size ** (-1 / spec.alpha)
    minima, endpoints = [], []
    for start in range(0, n_paths, chunk):
        size = min(chunk, n_paths - start)
        steps = sample_increment(spec, rng, (size, grid_size)) * scale
        paths = np.cumsum(steps, axis=1)
        minima.append(np.minimum(paths.min(axis=1), 0.0))
        endpoints.append(paths[:, -1])
    logger.info('sampled %d paths of %d steps for %s', n_paths, grid_size, spec)
    return PathEnsemble(spec, np.concatenate(minima), np.concatenate(endpoints),
                        grid_size=grid_size)
