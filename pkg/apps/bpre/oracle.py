"""Exact enumeration of tiny instances, used to validate the simulator."""
import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy import stats

from apps.bpre.constants import BRUTE_FORCE_CAP, BRUTE_FORCE_MAX_N, BRUTE_FORCE_MAX_STATES
from apps.envs.environments import offspring_parameters
from apps.envs.generating import transition_law
from reducedbpre.exceptions import StateSpaceTooLarge

logger = logging.getLogger('bpre.oracle')


def transition_matrix(family, parameter, cap):
    """Row z: law of the next generation, mass beyond ``cap`` lumped at cap."""
    matrix = np.zeros((cap + 1, cap + 1))
    matrix[0, 0] = 1.0
    support = np.arange(cap)
    for z in range(1, cap + 1):
        law = transition_law(family, parameter, z)
        matrix[z, :cap] = law.pmf(support)
        matrix[z, cap] = law.sf(cap - 1)
    return matrix


@dataclass(frozen=True)
class ExactLaw:
    """P(S_n = s, Z_r = i, Z_{r,n} = j); Z_n > 0 iff j >= 1."""
    table: dict
    x_threshold: float
    cap: int

    @property
    def total_mass(self):
        return sum(self.table.values())

    def survival(self):
        return sum(p for (s, i, j), p in self.table.items() if j >= 1)

    def accepted(self):
        """Law of (Z_r, Z_rn) given S_n <= x and Z_n > 0."""
        law = defaultdict(float)
        for (s, i, j), p in self.table.items():
            if s <= self.x_threshold and j >= 1:
                law[(i, j)] += p
        mass = sum(law.values())
        return {key: p / mass for key, p in law.items()}, mass


def brute_force_tiny(env_law, family, n, r, x_threshold, z0=1, cap=BRUTE_FORCE_CAP):
    """Joint law of (S_n, Z_r, Z_{r,n}) over every environment sequence of a
    discrete increment law with atoms ``env_law.atoms``."""
    if n > BRUTE_FORCE_MAX_N:
        raise StateSpaceTooLarge('enumeration is limited to n <= %d' % BRUTE_FORCE_MAX_N)
    if not 0 <= r <= n:
        raise ValueError('need 0 <= r <= n')
    atoms = [(x, p) for x, p in zip(env_law.atoms, env_law.probabilities) if p > 0]
    states = len(atoms) ** n * (cap + 1) ** 2
    if states > BRUTE_FORCE_MAX_STATES:
        raise StateSpaceTooLarge('%d states exceed %d' % (states, BRUTE_FORCE_MAX_STATES))

    matrices = {x: transition_matrix(family, float(offspring_parameters(family, x)), cap)
                for x, _ in atoms}
    table = defaultdict(float)
    for sequence in itertools.product(atoms, repeat=n):
        increments = np.array([x for x, _ in sequence])
        weight = float(np.prod([p for _, p in sequence]))
        s_n = round(float(increments.sum()), 12)

        chain = np.zeros(cap + 1)
        chain[min(z0, cap)] = 1.0
        for x in increments[:r]:
            chain = chain @ matrices[x]
        # one ancestor at r pushed through the remaining generations
        lineage = np.zeros(cap + 1)
        lineage[1] = 1.0
        for x in increments[r:]:
            lineage = lineage @ matrices[x]
        survival = 1.0 - lineage[0]

        table[(s_n, 0, 0)] += weight * chain[0]
        for i in range(1, cap + 1):
            if chain[i]:
                pmf = stats.binom.pmf(np.arange(i + 1), i, survival)
                for j in range(i + 1):
                    table[(s_n, i, j)] += weight * chain[i] * pmf[j]
    logger.info('enumerated %d environments, %d cells', len(atoms) ** n, len(table))
    return ExactLaw(dict(table), x_threshold, cap)


def empirical_law(samples):
    law = defaultdict(float)
    for sample in samples:
        law[(sample.Z_r, sample.Z_rn)] += 1.0
    total = sum(law.values())
    return {key: count / total for key, count in law.items()}


def total_variation(p, q):
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(key, 0.0) - q.get(key, 0.0)) for key in keys)
