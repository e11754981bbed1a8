import logging
import math
from dataclasses import dataclass

import numpy as np

from apps.bpre.constants import MIN_DIAGNOSTIC_SAMPLES
from apps.bpre.populations import generation_sizes, reduced_profile, simulate_tree
from apps.envs.constants import FAMILY
from apps.envs.generating import log_survival_profile, survival_closed_form_lf
from apps.stats.ecdf import normal_quantile
from apps.stats.regression import trend_monotone
from reducedbpre.exceptions import InsufficientSamples

logger = logging.getLogger('bpre.diagnostics')

QUANTILES = (0.5, 0.9, 0.95)


def quantile_ci(values, p):
    """Order-statistic interval for the p-quantile: (value, half-width)."""
    values = np.sort(np.asarray(values, dtype=float))
    n = len(values)
    spread = normal_quantile() * math.sqrt(n * p * (1 - p))
    low = values[max(int(math.floor(n * p - spread)), 0)]
    high = values[min(int(math.ceil(n * p + spread)), n - 1)]
    estimate = float(np.quantile(values, p))
    return estimate, float(max(estimate - low, high - estimate))


@dataclass(frozen=True)
class DiagnosticsReport:
    n: int
    scale: float
    delta: dict
    log_o: dict
    binomial: dict
    binomial_below_two: float
    martingale: dict
    delta_mismatch: float

    @property
    def delta_q95(self):
        return self.delta[0.95]

    @property
    def binomial_q95(self):
        return self.binomial[0.95]


def _summary(values):
    return dict((p, quantile_ci(values, p)) for p in QUANTILES)


def diagnostics_check(samples, scenario, min_samples=MIN_DIAGNOSTIC_SAMPLES):
    """Quantiles of |Delta|/a_m, log O/a_m, the standardized binomial
    deviation of Z_rn and log Z_r - S_r over accepted samples."""
    if len(samples) < min_samples:
        raise InsufficientSamples('diagnostics need %d accepted samples, got %d' % (
            min_samples, len(samples)))
    scale = scenario.diagnostic_scale
    z_r = np.array([s.Z_r for s in samples], dtype=float)
    z_rn = np.array([s.Z_rn for s in samples], dtype=float)
    log_surv = np.array([s.log_survival for s in samples])
    delta = np.array([s.Delta_rn for s in samples])
    mean = np.exp(np.log(z_r) + log_surv)
    deviation = np.abs(z_rn - mean) / np.sqrt(mean)
    recomputed = np.array([s.recomputed_delta() for s in samples])

    report = DiagnosticsReport(
        n=scenario.n,
        scale=scale,
        delta=_summary(np.abs(delta) / scale),
        log_o=_summary(np.log([s.O_rn for s in samples]) / scale),
        binomial=_summary(deviation),
        binomial_below_two=float(np.mean(deviation < 2)),
        martingale=_summary(np.log(z_r) - np.array([s.S_r for s in samples])),
        delta_mismatch=float(np.max(np.abs(recomputed - delta))),
    )
    logger.info('diagnostics n=%d: |Delta|/a q95 %.3f, binomial q95 %.3f',
                scenario.n, report.delta_q95[0], report.binomial_q95[0])
    return report


def diagnostics_trend(reports):
    """(delta trend passes, binomial trend passes) along an n ladder."""
    reports = sorted(reports, key=lambda r: r.n)
    delta = trend_monotone([r.delta_q95[0] for r in reports],
                           [r.delta_q95[1] for r in reports])
    binomial = trend_monotone([r.binomial_q95[0] for r in reports],
                              [r.binomial_q95[1] for r in reports])
    if not delta:
        logger.warning('95th percentile of |Delta|/a_m does not decrease')
    return delta, binomial


@dataclass(frozen=True)
class GenealogyReport:
    r: int
    n_trees: int
    residual: float
    stderr: float
    closed_form_gap: float = None


def genealogy_check(env, n_trees, rng, r=None):
    """Whole trees on one environment.

    Given Z_r, Z_{r,n} is binomial with the survival probability of the
    environment from r, so Z_{r,n} - Z_r P(Z_n > 0 | Z_r = 1) averages to
    zero. For linear-fractional laws the backward recursion is also held
    against the closed form at every r.
    """
    r = env.n // 2 if r is None else r
    if not 0 <= r <= env.n:
        raise ValueError('need 0 <= r <= %d' % env.n)
    if n_trees < 2:
        raise InsufficientSamples('genealogy check needs two trees')
    survival = np.exp(log_survival_profile(env.family, env.increments))
    residuals = np.empty(n_trees)
    for i in range(n_trees):
        tree = simulate_tree(env, rng)
        residuals[i] = reduced_profile(tree)[r] - generation_sizes(tree)[r] * survival[r]

    gap = None
    if env.family == FAMILY.LINEAR_FRACTIONAL:
        closed = [survival_closed_form_lf(env, q, env.n) for q in range(env.n + 1)]
        gap = float(np.max(np.abs(survival - closed)))
    report = GenealogyReport(r, n_trees, float(residuals.mean()),
                             float(residuals.std(ddof=1) / math.sqrt(n_trees)), gap)
    logger.info('genealogy r=%d over %d trees: residual %.4f +- %.4f',
                r, n_trees, report.residual, report.stderr)
    return report
