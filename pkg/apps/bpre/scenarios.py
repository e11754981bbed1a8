import math
from dataclasses import dataclass

import numpy as np

from apps.bpre.constants import REGIME, SCHEDULE_EXPONENTS
from apps.stable.laws import norming


def schedule(regime, n, theta=1.0, meander_s=0.5):
    """(k, r) for horizon ``n`` under ``regime``; m = n - r."""
    low, high = SCHEDULE_EXPONENTS.get(regime, (None, None))
    if regime == REGIME.THM1:
        m = math.ceil(n ** low)
        return math.ceil(n ** high), n - m
    if regime == REGIME.THM2:
        m = math.ceil(n ** low)
        return math.ceil(theta * m), n - m
    if regime == REGIME.THM3_K_GG_R:
        return math.ceil(n ** high), math.ceil(n ** low)
    if regime == REGIME.THM3_THETA_R:
        r = math.ceil(n ** low)
        return math.ceil(theta * r), r
    if regime == REGIME.THM3_MIN_GG_K:
        return math.ceil(n ** high), n // 2
    if regime == REGIME.WALK_ONLY:
        return math.ceil(n ** high), n // 2
    if regime == REGIME.MEANDER:
        return n - 1, int(math.floor(meander_s * n))
    raise ValueError('regime %r has no schedule' % regime)


@dataclass(frozen=True)
class ScenarioSpec:
    model: object
    n: int
    regime: str
    t: float = 1.0
    theta: float = 1.0
    target_accepted: int = 5000
    max_trials: int = 200000
    seed: int = 0
    k: int = None
    r: int = None
    threshold: float = None
    meander_s: float = 0.5
    z0: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError('horizon must be at least 2')
        if not self.t > 0 or not self.theta > 0:
            raise ValueError('t and theta must be positive')
        if self.regime == REGIME.EXPLICIT:
            if self.r is None or (self.k is None and self.threshold is None):
                raise ValueError('explicit scenario needs r and k or a threshold')
            k = self.k if self.k is not None else self.n - 1
            r = self.r
        else:
            k, r = schedule(self.regime, self.n, self.theta, self.meander_s)
            k = k if self.k is None else self.k
            r = r if self.r is None else self.r
        object.__setattr__(self, 'k', int(k))
        object.__setattr__(self, 'r', int(r))
        self.check_ordering()

    @property
    def m(self):
        return self.n - self.r

    @property
    def spec(self):
        return self.model.increment_law

    def check_ordering(self):
        n, k, r, m = self.n, self.k, self.r, self.m
        bounds = 0 <= r < n if self.regime == REGIME.EXPLICIT else 1 <= r < n
        if not bounds or not 1 <= k < n:
            raise ValueError('need 1 <= r < n and 1 <= k < n, got n=%d, k=%d, '
                             'r=%d' % (n, k, r))
        violated = (
            (self.regime == REGIME.THM1 and not n > k > m) or
            (self.regime == REGIME.THM3_K_GG_R and not k > r) or
            (self.regime == REGIME.THM3_MIN_GG_K and not min(r, m) > k)
        )
        if violated:
            raise ValueError('%s ordering violated by n=%d, k=%d, r=%d, m=%d' % (
                self.regime, n, k, r, m))

    @property
    def cond_log(self):
        """log(n - r) <= a_{min(k, r)} / 10, recorded for the thm3 regimes."""
        return math.log(self.m) <= norming(self.spec, min(self.k, self.r)) / 10

    @property
    def walk_threshold(self):
        if self.threshold is not None:
            return self.threshold
        if self.regime == REGIME.MEANDER:
            return np.inf
        return self.t * norming(self.spec, self.k)

    def observable(self, samples):
        """Normalized log Z_{r,n} the regime's limit theorem speaks about."""
        log_z = np.log([s.Z_rn for s in samples])
        if self.regime == REGIME.THM1:
            s_r = np.array([s.S_r for s in samples])
            return (log_z - s_r) / norming(self.spec, self.m)
        if self.regime == REGIME.THM2:
            return log_z / norming(self.spec, self.m)
        if self.regime == REGIME.THM3_K_GG_R:
            return log_z / norming(self.spec, self.r)
        if self.regime == REGIME.MEANDER:
            sigma = math.sqrt(2 * self.spec.c)
            return log_z / (sigma * norming(self.spec, self.n))
        return log_z / norming(self.spec, self.k)

    @property
    def diagnostic_scale(self):
        """a_m, or a_{k ^ r} for the thm3 regimes."""
        if self.regime in REGIME.THEOREM3:
            return norming(self.spec, min(self.k, self.r))
        return norming(self.spec, self.m)
