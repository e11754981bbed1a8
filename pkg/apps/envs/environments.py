import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from apps.envs.constants import DEFAULT_KAPPA, FAMILY, OVERFLOW_LOG
from reducedbpre.exceptions import ParameterOverflow

logger = logging.getLogger('envs.environments')


@dataclass(frozen=True)
class TwoPointLaw:
    """X = high with probability p_high, otherwise low."""
    low: float
    high: float
    p_high: float = 0.5

    def __post_init__(self):
        if not self.low <= self.high:
            raise ValueError('two-point law needs low <= high')
        if not 0 <= self.p_high <= 1:
            raise ValueError('p_high must lie in [0, 1]')

    @property
    def atoms(self):
        return (self.low, self.high)

    @property
    def probabilities(self):
        return (1 - self.p_high, self.p_high)

    def sample(self, rng, size=None):
        return np.where(rng.uniform(size=size) < self.p_high, self.high, self.low)


@dataclass(frozen=True)
class EnvironmentModel:
    family: str
    increment_law: object
    kappa: float = DEFAULT_KAPPA

    def __post_init__(self):
        if self.family not in FAMILY.ETA:
            raise ValueError('unknown offspring family %r' % self.family)
        if not self.kappa > 0:
            raise ValueError('kappa must be positive')

    @property
    def eta(self):
        return FAMILY.ETA[self.family]

    @property
    def increment_spec(self):
        return self.increment_law


@dataclass(frozen=True)
class EnvRealization:
    """Increments X_1..X_n of the associated walk, X_i = log F_i'(1)."""
    family: str
    increments: np.ndarray
    prefix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        increments = np.asarray(self.increments, dtype=float)
        object.__setattr__(self, 'increments', increments)
        object.__setattr__(
            self, 'prefix', np.concatenate([[0.0], np.cumsum(increments)]))

    @property
    def n(self):
        return len(self.increments)

    @property
    def eta(self):
        return FAMILY.ETA[self.family]

    @property
    def parameters(self):
        """lambda_i = e^X for Poisson, p_i = e^X / (1 + e^X) for geometric."""
        return offspring_parameters(self.family, self.increments)

    @property
    def mean_offspring(self):
        return np.exp(self.increments)


def offspring_parameters(family, increments):
    increments = np.asarray(increments, dtype=float)
    if family == FAMILY.POISSON:
        return np.exp(increments)
    return special.expit(increments)


def check_overflow(increments):
    worst = float(np.max(np.abs(increments))) if np.size(increments) else 0.0
    if worst > OVERFLOW_LOG:
        raise ParameterOverflow('|X| = %g is not representable as e^X' % worst)


def draw_environment(model, n, rng):
    if n < 1:
        raise ValueError('environment horizon must be positive')
    increments = np.asarray(model.increment_law.sample(rng, n), dtype=float)
    check_overflow(increments)
    return EnvRealization(model.family, increments)


def draw_increments(model, n, size, rng):
    """(size, n) increment matrix and the mask of rows safe from overflow."""
    increments = np.asarray(model.increment_law.sample(rng, (size, n)), dtype=float)
    safe = np.all(np.abs(increments) <= OVERFLOW_LOG, axis=1)
    if not safe.all():
        logger.warning('discarded %d environments with |X| > %g',
                       int((~safe).sum()), OVERFLOW_LOG)
    return increments, safe
