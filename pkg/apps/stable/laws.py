import functools
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from apps.stable.constants import (
    CDF_TABLE_MAX, CDF_TABLE_POINTS, INVERSION_TAIL, PRESET, QUAD_TOLERANCE
)
from reducedbpre.exceptions import QuadratureError

logger = logging.getLogger('stable.laws')


def default_scale(alpha):
    return 0.5 if alpha == 2 else 1.0


def rho_closed_form(alpha, beta):
    if beta == 0:
        return 0.5
    return 0.5 + math.atan(beta * math.tan(math.pi * alpha / 2)) / (math.pi * alpha)


@dataclass(frozen=True)
class StableSpec:
    """Strictly stable law with characteristic function

    exp{-c|w|^alpha (1 - i beta sign(w) tan(pi alpha / 2))}.
    """
    alpha: float
    beta: float = 0.0
    c: float = None
    rho: float = field(init=False, compare=False)

    def __post_init__(self):
        alpha, beta = float(self.alpha), float(self.beta)
        admissible = (
            (0 < alpha < 2 and alpha != 1 and abs(beta) < 1) or
            (alpha in (1.0, 2.0) and beta == 0)
        )
        if not admissible:
            raise ValueError(
                'alpha=%s, beta=%s is not an admissible pair' % (alpha, beta))
        c = default_scale(alpha) if self.c is None else float(self.c)
        if not c > 0:
            raise ValueError('scale c must be positive, got %s' % c)
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'beta', beta)
        object.__setattr__(self, 'c', c)
        object.__setattr__(self, 'rho', rho_closed_form(alpha, beta))

    @classmethod
    def preset(cls, name):
        alpha, beta = PRESET.PARAMETERS[name]
        return cls(alpha, beta)

    @property
    def alpha_rho(self):
        return self.alpha * self.rho

    @property
    def alpha_one_minus_rho(self):
        return self.alpha * (1 - self.rho)

    @property
    def skew(self):
        """c * beta * tan(pi alpha / 2), the phase coefficient of w^alpha."""
        if self.beta == 0:
            return 0.0
        return self.c * self.beta * math.tan(math.pi * self.alpha / 2)

    @property
    def sigma(self):
        return self.c ** (1 / self.alpha)

    @property
    def is_gaussian(self):
        return self.alpha == 2

    def characteristic(self, w):
        w = np.asarray(w, dtype=float)
        aw = np.abs(w) ** self.alpha
        return np.exp(-self.c * aw + 1j * self.skew * aw * np.sign(w))

    def sample(self, rng, size=None):
        return sample_increment(self, rng, size)


def sample_increment(spec, rng, size=None):
    """Chambers-Mallows-Stuck draws from ``spec``."""
    if spec.is_gaussian:
        return rng.standard_normal(size) * math.sqrt(2 * spec.c)

    v = rng.uniform(-math.pi / 2, math.pi / 2, size)
    w = rng.standard_exponential(size)
    alpha = spec.alpha
    if alpha == 1:
        return spec.sigma * np.tan(v)

    t = spec.beta * math.tan(math.pi * alpha / 2)
    b = math.atan(t) / alpha
    s = (1 + t * t) ** (1 / (2 * alpha))
    x = (
        s * np.sin(alpha * (v + b)) / np.cos(v) ** (1 / alpha) *
        (np.cos(v - alpha * (v + b)) / w) ** ((1 - alpha) / alpha)
    )
    return spec.sigma * x


def _cutoff(spec):
    return (math.log(1 / INVERSION_TAIL) / spec.c) ** (1 / spec.alpha)


def _quad(func, upper, weight=None, wvar=0.0, limit=256):
    kwargs = {'limit': limit, 'epsabs': QUAD_TOLERANCE}
    if weight is not None:
        kwargs.update(weight=weight, wvar=wvar)
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            value, error = integrate.quad(func, 0.0, upper, **kwargs)
        except integrate.IntegrationWarning as e:
            raise QuadratureError(str(e))
    if not error < 1e-6:
        raise QuadratureError('inversion integral error %.3g' % error)
    return value


def _phases(spec):
    a, k, c = spec.alpha, spec.skew, spec.c
    real = lambda w: math.exp(-c * w ** a) * math.cos(k * w ** a)
    imag = lambda w: math.exp(-c * w ** a) * math.sin(k * w ** a)
    return real, imag


def stable_density(spec, x, limit=256):
    """g(x) by Fourier inversion of the characteristic function.

    g(x) = (1/pi) int_0^inf Re[e^{-iwx} G(w)] dw
    """
    x = float(x)
    upper = _cutoff(spec)
    real, imag = _phases(spec)
    if x == 0:
        value = _quad(real, upper, limit=limit)
    else:
        value = _quad(real, upper, 'cos', abs(x), limit)
        if spec.skew:
            value += math.copysign(_quad(imag, upper, 'sin', abs(x), limit), x)
    return max(value / math.pi, 0.0)


def stable_cdf(spec, x, limit=256):
    """P(Y_1 <= x) by Gil-Pelaez inversion.

    F(x) = 1/2 - (1/pi) int_0^inf Im[e^{-iwx} G(w)] / w dw
    """
    x = float(x)
    upper = _cutoff(spec)
    real, imag = _phases(spec)
    odd = lambda w: imag(w) / w if w else 0.0

    integral = 0.0
    if spec.skew:
        if x == 0:
            integral += _quad(odd, upper, limit=limit)
        else:
            integral += _quad(odd, upper, 'cos', abs(x), limit)
    if x != 0:
        # int real(w) sin(wx)/w = Si(Wx) + int (real(w) - 1)/w sin(wx)
        regular = lambda w: (real(w) - 1.0) / w if w else 0.0
        tail = special.sici(upper * abs(x))[0] + \
            _quad(regular, upper, 'sin', abs(x), limit)
        integral -= math.copysign(tail, x)
    return min(max(0.5 - integral / math.pi, 0.0), 1.0)


def positivity_rho(spec):
    """rho = P(Y_1 > 0), integrated from the inversion formula."""
    if spec.beta == 0:
        return 0.5
    return 1.0 - stable_cdf(spec, 0.0)


def norming(spec, n):
    """a_n = n^(1/alpha); the slowly varying factor is taken to be 1."""
    if n < 1:
        raise ValueError('norming needs n >= 1, got %s' % n)
    return float(n) ** (1 / spec.alpha)


class NegativeTail(object):
    """P(X >= -x) for x >= 0, tabulated once per law.

    Beyond the table the stable tail x^(-alpha) is extrapolated.
    """
    def __init__(self, spec):
        self.spec = spec
        if spec.is_gaussian:
            self.grid = self.values = None
            return
        grid = np.concatenate(
            [[0.0], np.geomspace(1e-3, CDF_TABLE_MAX, CDF_TABLE_POINTS)])
        self.grid = grid
        self.values = np.array([stable_cdf(spec, -x) for x in grid])
        logger.info('tabulated negative tail for %s', spec)

    def lower_mass(self, x):
        """P(X < -x)."""
        x = np.asarray(x, dtype=float)
        if self.grid is None:
            return special.ndtr(-x / math.sqrt(2 * self.spec.c))
        inside = np.interp(x, self.grid, self.values)
        beyond = self.values[-1] * (self.grid[-1] / np.maximum(x, self.grid[-1])) \
            ** self.spec.alpha
        return np.where(x <= self.grid[-1], inside, beyond)

    def upper_mass(self, x):
        return 1.0 - self.lower_mass(x)

    def sample_above(self, lower, rng):
        """Draws of X conditioned on X >= lower, one per entry of ``lower``."""
        lower = np.asarray(lower, dtype=float)
        if self.grid is None:
            scale = math.sqrt(2 * self.spec.c)
            floor = special.ndtr(lower / scale)
            u = floor + rng.uniform(size=lower.shape) * (1 - floor)
            u = np.minimum(u, np.nextafter(1.0, 0.0))
            return np.maximum(special.ndtri(u) * scale, lower)
        out = sample_increment(self.spec, rng, lower.shape)
        pending = out < lower
        while pending.any():
            out[pending] = sample_increment(self.spec, rng, int(pending.sum()))
            pending = out < lower
        return out


@functools.lru_cache(maxsize=16)
def negative_tail(spec):
    return NegativeTail(spec)
