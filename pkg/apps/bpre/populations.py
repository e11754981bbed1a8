import logging

import numpy as np

from apps.bpre.constants import TREE_MAX_PARTICLES
from apps.envs.environments import offspring_parameters
from apps.envs.generating import draw_offspring
from reducedbpre.exceptions import PopulationOverflow

logger = logging.getLogger('bpre.populations')


def simulate_generation_chain(env, r, rng, z0=1, cap=None):
    """Z_0..Z_r of the population given the environment."""
    if not 0 <= r <= env.n:
        raise ValueError('need 0 <= r <= %d, got %s' % (env.n, r))
    parameters = env.parameters
    sizes = np.zeros(r + 1, dtype=np.int64)
    sizes[0] = z0
    for j in range(1, r + 1):
        if not sizes[j - 1]:
            break
        sizes[j] = draw_offspring(env.family, parameters[j - 1], sizes[j - 1], rng)
        if cap is not None and sizes[j] > cap:
            raise PopulationOverflow('Z_%d = %d exceeds cap %d' % (j, sizes[j], cap))
    return sizes


def step_generation(family, increments, z, rng):
    """Next sizes of populations ``z`` in environments with log-means
    ``increments``."""
    z = np.array(z, dtype=np.int64)
    alive = z > 0
    parameters = offspring_parameters(family, increments[alive])
    z[alive] = draw_offspring(family, parameters, z[alive], rng)
    return z


def simulate_generations(family, increments, r, rng, z0=1, cap=None):
    """Z_r for each row of an increment matrix, with the overflow mask.

    Rows whose population passes ``cap`` are zeroed and flagged.
    """
    size = len(increments)
    z = np.full(size, z0, dtype=np.int64)
    overflow = np.zeros(size, dtype=bool)
    for j in range(r):
        if not z.any():
            break
        z = step_generation(family, increments[:, j], z, rng)
        if cap is not None:
            over = z > cap
            overflow |= over
            z[over] = 0
    return z, overflow


def reduced_count(z_r, q_rn, rng):
    """Binomial(Z_r, 1 - q): ancestors at r with descendants at n."""
    if np.any(np.asarray(z_r) < 0):
        raise ValueError('population must be nonnegative')
    return rng.binomial(z_r, np.clip(1.0 - np.asarray(q_rn, dtype=float), 0.0, 1.0))


def simulate_tree(env, rng, z0=1, max_particles=TREE_MAX_PARTICLES):
    """Genealogy as per-generation arrays of parent indices, generations 1..n."""
    parameters = env.parameters
    parents = []
    size = z0
    for j in range(env.n):
        counts = draw_offspring(env.family, np.full(size, parameters[j]),
                                np.ones(size, dtype=np.int64), rng)
        parents.append(np.repeat(np.arange(size), counts))
        size = len(parents[-1])
        if size > max_particles:
            raise PopulationOverflow('tree generation %d has %d particles' % (
                j + 1, size))
    return z0, parents


def reduced_profile(tree):
    """Z_{r,n} for r = 0..n: individuals at r with a descendant at n."""
    z0, parents = tree
    n = len(parents)
    profile = np.zeros(n + 1, dtype=np.int64)
    alive = np.ones(len(parents[-1]) if n else z0, dtype=bool)
    profile[n] = alive.sum()
    for r in range(n - 1, -1, -1):
        width = len(parents[r - 1]) if r else z0
        marked = np.zeros(width, dtype=bool)
        marked[parents[r][alive]] = True
        alive = marked
        profile[r] = alive.sum()
    return profile


def generation_sizes(tree):
    z0, parents = tree
    return np.array([z0] + [len(p) for p in parents])
