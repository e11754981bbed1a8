"""Walks conditioned to stay non-negative.

Two samplers are kept side by side: plain rejection, which is the
reference, and sequential importance sampling in which every step is
drawn from the increment law truncated to keep the walk non-negative.
The truncation probabilities accumulate into the path weight, so the
weighted ensemble has the law of the walk given {L_n >= 0}; a terminal
factor V-(S_n) / V-(x0) turns it into the Doob transform P_x^+.

Over long walks the weights spread out, so the ensemble is resampled
whenever its effective size falls below half the paths. Resampled paths
all get the mean weight, which keeps sum(weights) / n_paths an unbiased
estimate of P(L_n >= 0).
"""
import logging
from dataclasses import dataclass, replace

import numpy as np

from apps.stable.laws import StableSpec, negative_tail
from apps.walk.constants import (
    METHOD, REJECTION_ROUNDS, RESAMPLE_FRACTION, WALK_CHUNK
)
from apps.walk.paths import WalkPath, simulate_prefixes
from reducedbpre.exceptions import InsufficientAcceptance

logger = logging.getLogger('walk.conditioned')


@dataclass(frozen=True)
class ConditionedBatch:
    endpoints: np.ndarray
    log_weights: np.ndarray
    prefixes: np.ndarray = None
    min_after: np.ndarray = None
    method: str = METHOD.H_TRANSFORM
    attempted: int = 0

    def __len__(self):
        return len(self.endpoints)

    @property
    def weights(self):
        w = np.exp(self.log_weights - self.log_weights.max())
        return w / w.sum()

    @property
    def effective_size(self):
        return 1.0 / np.sum(self.weights ** 2)

    def paths(self):
        """Paths relative to their start, S_0 = 0."""
        if self.prefixes is None:
            raise ValueError('batch was sampled without keeping paths')
        return [WalkPath.from_prefix(p - p[0]) for p in self.prefixes]

    def tilt(self, log_factor):
        return replace(self, log_weights=self.log_weights + log_factor)

    def resample(self, rng, size=None):
        """Unweighted batch drawn multinomially from the weights."""
        size = len(self) if size is None else size
        index = rng.choice(len(self), size=size, p=self.weights)
        take = lambda a: None if a is None else a[index]
        return ConditionedBatch(
            self.endpoints[index], np.zeros(size), take(self.prefixes),
            take(self.min_after), self.method, self.attempted)


def resample_ancestors(log_weights, rng, fraction=RESAMPLE_FRACTION):
    """Multinomial ancestors and their common log weight, or (None, None)
    while the effective size stays above ``fraction`` of the paths."""
    top = log_weights.max()
    w = np.exp(log_weights - top)
    total = w.sum()
    if total ** 2 >= fraction * len(w) * np.sum(w ** 2):
        return None, None
    index = rng.choice(len(w), size=len(w), p=w / total)
    return index, top + np.log(total / len(w))


def truncated_walks(spec, n, x0, n_paths, rng, keep_paths=True, track_from=None,
                    resample=True):
    """Walks of ``n`` truncated steps from ``x0`` >= 0 with log weights
    sum_i log P(X >= -S_{i-1}).

    ``track_from`` records min over steps track_from..n of each path.
    With ``resample`` off the paths stay independent.
    """
    tail = negative_tail(spec)
    position = np.full(n_paths, float(x0))
    log_weights = np.zeros(n_paths)
    prefixes = np.empty((n_paths, n + 1)) if keep_paths else None
    if keep_paths:
        prefixes[:, 0] = position
    min_after = np.full(n_paths, np.inf) if track_from is not None else None
    if track_from == 0:
        min_after = np.minimum(min_after, position)

    resampled = 0
    for step in range(1, n + 1):
        log_weights += np.log(tail.upper_mass(position))
        position = position + tail.sample_above(-position, rng)
        if keep_paths:
            prefixes[:, step] = position
        if min_after is not None and step >= track_from:
            min_after = np.minimum(min_after, position)
        if not resample or step == n:
            continue
        index, level = resample_ancestors(log_weights, rng)
        if index is None:
            continue
        resampled += 1
        position = position[index]
        log_weights = np.full(n_paths, level)
        if keep_paths:
            prefixes[:, :step + 1] = prefixes[index, :step + 1]
        if min_after is not None:
            min_after = min_after[index]
    if resampled:
        logger.debug('resampled %d times over %d steps', resampled, n)
    return ConditionedBatch(position, log_weights, prefixes, min_after,
                            METHOD.H_TRANSFORM, n_paths)


def rejection_walks(law, n, x0, n_paths, rng, keep_paths=True, track_from=None,
                    chunk=WALK_CHUNK, max_rounds=REJECTION_ROUNDS):
    """Unconditioned walks kept only when L_n >= 0."""
    kept, attempted = [], 0
    accepted = 0
    for _ in range(max_rounds):
        prefix = simulate_prefixes(law, n, chunk, rng, x0)
        attempted += chunk
        prefix = prefix[prefix.min(axis=1) >= 0]
        kept.append(prefix)
        accepted += len(prefix)
        if accepted >= n_paths:
            break
    else:
        raise InsufficientAcceptance(
            'rejection kept %d of %d walks, %d wanted' % (
                accepted, attempted, n_paths), accepted, attempted)
    prefix = np.concatenate(kept)[:n_paths]
    min_after = prefix[:, track_from:].min(axis=1) \
        if track_from is not None else None
    logger.info('rejection acceptance %d/%d', accepted, attempted)
    return ConditionedBatch(
        prefix[:, -1].copy(), np.zeros(len(prefix)),
        prefix if keep_paths else None, min_after, METHOD.REJECTION, attempted)


def stay_nonnegative(spec, n, x0, n_paths, rng, method=METHOD.H_TRANSFORM,
                     keep_paths=True, track_from=None):
    """Weighted ensemble for the walk given {L_n >= 0}."""
    if method == METHOD.REJECTION:
        return rejection_walks(spec, n, x0, n_paths, rng, keep_paths, track_from)
    return truncated_walks(spec, n, x0, n_paths, rng, keep_paths, track_from)


def conditioned_sample_positive(spec, n, x0, rng, method=METHOD.H_TRANSFORM,
                                table=None, n_paths=1, extrapolate=False,
                                keep_paths=True):
    """Unweighted paths with law P_{x0}^+ on n steps."""
    if n < 1:
        raise ValueError('n must be positive')
    if x0 < 0:
        raise ValueError('start must be nonnegative')
    if table is None:
        raise ValueError('the Doob transform needs a renewal table for V-')
    v_start = float(table.v_minus_at(x0, extrapolate))

    if method == METHOD.REJECTION:
        endpoints, prefixes, attempted = [], [], 0
        while sum(len(e) for e in endpoints) < n_paths:
            batch = rejection_walks(spec, n, x0, max(n_paths, WALK_CHUNK), rng,
                                    keep_paths)
            attempted += batch.attempted
            v_end = table.v_minus_at(batch.endpoints, extrapolate)
            keep = rng.uniform(size=len(batch)) * v_end.max() < v_end
            endpoints.append(batch.endpoints[keep])
            if keep_paths:
                prefixes.append(batch.prefixes[keep])
        return ConditionedBatch(
            np.concatenate(endpoints)[:n_paths], np.zeros(n_paths),
            np.concatenate(prefixes)[:n_paths] if keep_paths else None,
            None, METHOD.REJECTION, attempted)

    batch = truncated_walks(spec, n, x0, 2 * n_paths, rng, keep_paths)
    v_end = table.v_minus_at(batch.endpoints, extrapolate)
    batch = batch.tilt(np.log(v_end) - np.log(v_start))
    logger.info('h-transform effective size %.0f of %d',
                batch.effective_size, len(batch))
    return batch.resample(rng, n_paths)


def conditioned_sample_negative(spec, n, x0, rng, method=METHOD.H_TRANSFORM,
                                table=None, n_paths=1, extrapolate=False,
                                keep_paths=True):
    """Paths with law P_{-x0}^-: started at -x0, kept negative, tilted by V+.

    Obtained by reflecting the positive case for the law of -X.
    """
    if table is None:
        raise ValueError('the Doob transform needs a renewal table for V+')
    mirrored = StableSpec(spec.alpha, -spec.beta, spec.c)
    batch = conditioned_sample_positive(
        mirrored, n, x0, rng, method, table.reflected(), n_paths, extrapolate,
        keep_paths)
    return replace(batch, endpoints=-batch.endpoints,
                   prefixes=None if batch.prefixes is None else -batch.prefixes)
