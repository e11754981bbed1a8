import logging
from dataclasses import dataclass

import numpy as np

from apps.walk.constants import WALK_CHUNK

logger = logging.getLogger('walk.paths')


@dataclass(frozen=True)
class WalkPath:
    """Increments X_1..X_n and prefix sums S_0 = 0, S_1..S_n."""
    increments: np.ndarray
    prefix: np.ndarray

    def __post_init__(self):
        if len(self.prefix) != len(self.increments) + 1 or self.prefix[0] != 0:
            raise ValueError('prefix must start at 0 and extend increments')

    @classmethod
    def from_increments(cls, increments):
        increments = np.asarray(increments, dtype=float)
        return cls(increments, np.concatenate([[0.0], np.cumsum(increments)]))

    @classmethod
    def from_prefix(cls, prefix):
        prefix = np.asarray(prefix, dtype=float)
        return cls(np.diff(prefix), prefix)

    @property
    def n(self):
        return len(self.increments)

    @property
    def end(self):
        return float(self.prefix[-1])


def simulate_walk(spec, n, rng):
    if n < 0:
        raise ValueError('walk length must be nonnegative')
    return WalkPath.from_increments(spec.sample(rng, n))


def simulate_prefixes(law, n, n_paths, rng, x0=0.0):
    """Prefix-sum matrix of shape (n_paths, n + 1) started at ``x0``."""
    steps = law.sample(rng, (n_paths, n))
    prefix = np.empty((n_paths, n + 1))
    prefix[:, 0] = x0
    np.cumsum(steps, axis=1, out=prefix[:, 1:])
    prefix[:, 1:] += x0
    return prefix


def iter_prefix_chunks(law, n, n_paths, rng, chunk=WALK_CHUNK, x0=0.0):
    for start in range(0, n_paths, chunk):
        yield simulate_prefixes(law, n, min(chunk, n_paths - start), rng, x0)


def min_stats(path, r):
    """(L_{r,n}, tau_{r,n}, M_n): window minimum, its first index, overall max.

    M_n is taken over 1..n and is -inf for the empty walk.
    """
    n = path.n
    if not 0 <= r <= n:
        raise ValueError('need 0 <= r <= n, got r=%s, n=%s' % (r, n))
    window = path.prefix[r:]
    offset = int(np.argmin(window))
    maximum = float(path.prefix[1:].max()) if n else -np.inf
    return float(window[offset]), r + offset, maximum
