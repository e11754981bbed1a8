import numpy as np
from scipy import stats

from apps.stats.constants import MIN_FIT_POINTS, MIN_TREND_POINTS


def tail_index_fit(abscissae, values):
    """OLS slope of log(values) against log(abscissae), with its stderr.

    Non-positive values are dropped before the fit.
    """
    x = np.asarray(abscissae, dtype=float)
    y = np.asarray(values, dtype=float)
    keep = (x > 0) & (y > 0)
    x, y = x[keep], y[keep]
    if len(np.unique(x)) < MIN_FIT_POINTS:
        raise ValueError('need %d distinct abscissae with positive values, '
                         'got %d' % (MIN_FIT_POINTS, len(np.unique(x))))
    fit = stats.linregress(np.log(x), np.log(y))
    return float(fit.slope), float(fit.stderr)


def geometric_abscissae(low, high, points):
    """Distinct integers spaced geometrically in [low, high]."""
    return np.unique(np.round(np.geomspace(low, high, points)).astype(int))


def trend_monotone(estimates, halfwidths):
    """True when each step along the ladder does not increase, or the two
    consecutive intervals overlap."""
    estimates = np.asarray(estimates, dtype=float)
    halfwidths = np.asarray(halfwidths, dtype=float)
    if len(estimates) < MIN_TREND_POINTS:
        raise ValueError('trend needs %d ladder points' % MIN_TREND_POINTS)
    if len(halfwidths) != len(estimates):
        raise ValueError('one half-width per estimate')
    for i in range(len(estimates) - 1):
        before, after = estimates[i], estimates[i + 1]
        if after <= before:
            continue
        if after - halfwidths[i + 1] <= before + halfwidths[i]:
            continue
        return False
    return True
