"""Time-one density g+ of the stable meander.

Walks conditioned to stay non-negative are rescaled by a_L. Kernels are
reflected oddly at 0, so the estimate vanishes at the boundary like g+.
In the Gaussian case the last ``KILLED_FRACTION`` of the walk is not
simulated: the density of Brownian motion killed at 0 carries each path
from S_{L'} to time L exactly.
"""
import logging
import math

import numpy as np
from django.conf import settings
from scipy import integrate, stats

from apps.stable.laws import norming
from apps.walk.conditioned import stay_nonnegative
from apps.walk.constants import METHOD
from reducedbpre.exceptions import InsufficientAcceptance

logger = logging.getLogger('stable.meander')

MIN_EFFECTIVE_PATHS = 200
KILLED_FRACTION = 0.5


def meander_endpoints(spec, n_paths, rng, walk_length=None,
                      method=METHOD.H_TRANSFORM, scale_length=None):
    """Weighted sample of S_L / a_M for walks given {L_L >= 0}, M defaulting
    to L."""
    if walk_length is None:
        walk_length = settings.REDUCED_BPRE['MEANDER_WALK_LENGTH']
    batch = stay_nonnegative(spec, walk_length, 0.0, n_paths, rng, method,
                             keep_paths=False)
    if batch.effective_size < MIN_EFFECTIVE_PATHS:
        raise InsufficientAcceptance(
            'meander sample degenerated to %.0f effective paths' %
            batch.effective_size, int(batch.effective_size), len(batch))
    logger.info('meander endpoints: %d paths, effective %.0f, length %d',
                len(batch), batch.effective_size, walk_length)
    return (batch.endpoints / norming(spec, scale_length or walk_length),
            batch.weights)


def odd_kernel_density(points, weights, z_grid, width):
    """sum_i w_i [phi_h(z - y_i) - phi_h(z + y_i)]: the Gaussian kernel
    killed at 0."""
    values = np.empty(len(z_grid))
    for i, z in enumerate(z_grid):
        values[i] = np.dot(weights, stats.norm.pdf(z - points, scale=width) -
                           stats.norm.pdf(z + points, scale=width))
    return np.maximum(values, 0.0)


def scott_width(points, weights):
    effective = 1.0 / np.sum(weights ** 2)
    mean = np.dot(weights, points)
    spread = math.sqrt(np.dot(weights, (points - mean) ** 2))
    return spread * effective ** -0.2


def meander_density(spec, z_grid, n_paths, rng, walk_length=None,
                    method=METHOD.H_TRANSFORM):
    """g+ on ``z_grid``, renormalized to integrate to 1 over the grid."""
    z_grid = np.asarray(z_grid, dtype=float)
    if np.any(z_grid < 0) or np.any(np.diff(z_grid) <= 0):
        raise ValueError('z_grid must be increasing and nonnegative')
    if walk_length is None:
        walk_length = settings.REDUCED_BPRE['MEANDER_WALK_LENGTH']

    if spec.is_gaussian and walk_length > 1:
        killed = int(walk_length * KILLED_FRACTION)
        points, weights = meander_endpoints(
            spec, n_paths, rng, walk_length - killed, method, walk_length)
        width = math.sqrt(2 * spec.c * killed) / norming(spec, walk_length)
    else:
        points, weights = meander_endpoints(spec, n_paths, rng, walk_length,
                                            method)
        width = scott_width(points, weights)
    values = odd_kernel_density(points, weights, z_grid, width)
    mass = integrate.trapezoid(values, z_grid)
    if mass <= 0:
        raise InsufficientAcceptance('meander density vanished on the grid',
                                     0, len(points))
    return values / mass
