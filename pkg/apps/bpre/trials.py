"""Staged rejection harness for {S_n <= t a_k, Z_n > 0}.

A trial draws the environment first and rejects on the walk alone;
only survivors get a population, simulated up to generation r. The
number of generation-r ancestors with descendants at n is then one
binomial draw with the environment-conditional survival probability.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from scipy import special

from apps.bpre.constants import TRIAL_STREAM
from apps.bpre.populations import reduced_count, simulate_generations
from apps.envs.environments import draw_increments
from apps.envs.generating import log_survival_backward
from apps.stable.rngs import generator
from reducedbpre.exceptions import ParameterOverflow, PopulationOverflow

logger = logging.getLogger('bpre.trials')


@dataclass(frozen=True)
class ReducedSample:
    trial_index: int
    S_r: float
    S_n: float
    S_tau: float
    tau_rn: int
    Z_r: int
    q_rn: float
    Z_rn: int
    O_rn: float
    Delta_rn: float
    log_survival: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if not 0 <= self.Z_rn <= self.Z_r:
            raise ValueError('need 0 <= Z_rn <= Z_r')
        if not 0 <= self.q_rn < 1:
            raise ValueError('q_rn must lie in [0, 1)')
        if self.S_tau > min(self.S_r, self.S_n):
            raise ValueError('S_tau must be the window minimum')

    def recomputed_delta(self):
        return math.log(self.Z_r * (1 - self.q_rn)) - self.S_tau


@dataclass
class BlockResult:
    block_index: int
    samples: list
    attempted: int = 0
    walk_passed: int = 0
    extinct_by_r: int = 0
    overflow: int = 0

    def merge(self, other):
        self.samples.extend(other.samples)
        self.attempted += other.attempted
        self.walk_passed += other.walk_passed
        self.extinct_by_r += other.extinct_by_r
        self.overflow += other.overflow
        return self

    @property
    def accepted(self):
        return len(self.samples)


def survival_given_env(family, increments):
    """P(Z_n > 0 | environment) for Z_0 = 1, rows of X_1..X_n."""
    return np.exp(log_survival_backward(family, increments))


def o_statistic(prefix_window, s_tau, eta):
    """O_{r,n} = 1 + sum_{q=r}^{n-1} eta e^{S_tau - S_q}, rows of S_r..S_n."""
    terms = s_tau[:, None] - prefix_window[:, :-1] + math.log(eta)
    return 1.0 + np.exp(special.logsumexp(terms, axis=1))


def _evaluate(scenario, increments, safe, rngs, first_index, cap):
    """Walk predicate, population to r and the binomial survival draw for
    each row of ``increments``; rows not ``safe`` count as overflow.

    Row i draws its population from ``rngs[i]`` only, so a trial can be
    replayed on its own.
    """
    model = scenario.model
    r = scenario.r
    size = len(increments)
    prefix = np.concatenate([np.zeros((size, 1)), np.cumsum(increments, axis=1)],
                            axis=1)
    passed = safe & (prefix[:, -1] <= scenario.walk_threshold)
    rows = np.flatnonzero(passed)
    result = BlockResult(None, [], attempted=size, walk_passed=len(rows),
                         overflow=int((~safe).sum()))
    if not len(rows):
        return result

    log_surv = log_survival_backward(model.family, increments[rows, r:])
    z_r = np.zeros(len(rows), dtype=np.int64)
    z_rn = np.zeros(len(rows), dtype=np.int64)
    for i, row in enumerate(rows):
        z, overflow = simulate_generations(
            model.family, increments[row:row + 1], r, rngs[row], scenario.z0, cap)
        if overflow[0]:
            result.overflow += 1
        elif not z[0]:
            result.extinct_by_r += 1
        else:
            z_r[i] = z[0]
            z_rn[i] = reduced_count(z[0], -np.expm1(log_surv[i]), rngs[row])
    keep = z_rn >= 1
    rows, z_r, z_rn, log_surv = rows[keep], z_r[keep], z_rn[keep], log_surv[keep]
    if not len(rows):
        return result

    window = prefix[rows, r:]
    offset = window.argmin(axis=1)
    s_tau = window[np.arange(len(rows)), offset]
    o_rn = o_statistic(window, s_tau, model.eta)
    delta = np.log(z_r) + log_surv - s_tau
    for i, row in enumerate(rows):
        result.samples.append(ReducedSample(
            trial_index=first_index + int(row),
            S_r=float(window[i, 0]), S_n=float(window[i, -1]),
            S_tau=float(s_tau[i]), tau_rn=r + int(offset[i]),
            Z_r=int(z_r[i]), q_rn=float(-np.expm1(log_surv[i])),
            Z_rn=int(z_rn[i]), O_rn=float(o_rn[i]), Delta_rn=float(delta[i]),
            log_survival=float(log_surv[i]),
        ))
    return result


def population_cap():
    return settings.REDUCED_BPRE['POPULATION_CAP']


def trial_generator(scenario, trial_index, block_size):
    """Philox stream of one trial, keyed by (seed, 0, block, position)."""
    block_index, position = divmod(trial_index, block_size)
    return generator(scenario.seed, TRIAL_STREAM, block_index, position)


def run_conditioned_trial(scenario, rng, trial_index=0):
    """One trial of the staged harness; None when rejected.

    Overflow of the environment or of the population is raised.
    """
    increments, safe = draw_increments(scenario.model, scenario.n, 1, rng)
    if not safe.all():
        raise ParameterOverflow('trial %d drew |X| beyond range' % trial_index)
    result = _evaluate(scenario, increments, safe, [rng], trial_index,
                       population_cap())
    if result.overflow:
        raise PopulationOverflow('trial %d passed the population cap' % trial_index)
    return result.samples[0] if result.samples else None


def replay_trial(scenario, trial_index, block_size):
    """The trial ``trial_index`` of a run with blocks of ``block_size``."""
    return run_conditioned_trial(
        scenario, trial_generator(scenario, trial_index, block_size), trial_index)


def run_trial_block(scenario, block_index, block_size):
    """Trials block_index * block_size ..., each on its own Philox stream."""
    first = block_index * block_size
    size = min(block_size, scenario.max_trials - first)
    if size <= 0:
        return BlockResult(block_index, [])
    rngs = [trial_generator(scenario, first + i, block_size) for i in range(size)]
    drawn = [draw_increments(scenario.model, scenario.n, 1, rng) for rng in rngs]
    increments = np.concatenate([d[0] for d in drawn])
    safe = np.concatenate([d[1] for d in drawn])
    result = _evaluate(scenario, increments, safe, rngs, first, population_cap())
    result.block_index = block_index
    return result
