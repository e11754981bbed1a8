"""Scenario pipelines.

Trial blocks run as celery tasks on a local thread pool. Blocks are
consumed in index order and the run stops at the first block that brings
the accepted count to target, so the outcome does not depend on how many
blocks were in flight.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from apps.bpre.constants import REGIME
from apps.bpre.constants import GENEALOGY_GENERATIONS, GENEALOGY_TREES
from apps.bpre.diagnostics import (
    diagnostics_check, diagnostics_trend, genealogy_check
)
from apps.bpre.scenarios import schedule
from apps.bpre.theta import estimate_theta
from apps.bpre.trials import BlockResult
from apps.envs.environments import draw_environment
from apps.limits.laws import MeanderTable, shared_ensemble, theorem_reference
from apps.runner.constants import (
    ASYMPV_RATIO, BINOMIAL_BELOW_TWO_MIN, CHECK, DELTA_IDENTITY_TOLERANCE,
    DELTA_Q95_MAX, EVENT_B_RATIO, EXP_FUNCTIONAL_J, EXP_FUNCTIONAL_POINTS,
    EXP_FUNCTIONAL_SPREAD, EXPONENT_TOLERANCE, IDENTITY_SIGMAS, KS_TOLERANCE,
    LADDER_DIVISORS, MEANDER_Z_MAX, MEANDER_Z_POINTS, PROPERNESS_TOLERANCE,
    RENEWAL_GRID_POINTS, RENEWAL_TOP_FRACTION, SCENARIO, STATUS, STREAM,
    STRICT_RENEWAL_TOLERANCE, THETA_RATIO_SPREAD, THETA_SERIES_AGREEMENT,
)
from apps.runner.tasks import run_trial_block_task
from apps.stable.laws import norming
from apps.stable.meander import meander_density
from apps.stable.rngs import generator
from apps.stats.ecdf import Ecdf, ks_distance, normal_quantile
from apps.stats.regression import geometric_abscissae, trend_monotone
from apps.stats.reports import ReportRow
from apps.walk.asymptotics import (
    event_b_probability, ladder_tail_index, renewal_exponent,
    scaled_exp_functional, strict_renewal
)
from apps.walk.constants import SIDE
from apps.walk.ladders import asympv_ratio, renewal_table
from reducedbpre.exceptions import (
    InsufficientSamples, ParameterOverflow, PopulationOverflow
)

logger = logging.getLogger('runner.pipelines')


@dataclass
class RunResult:
    config: object
    rows: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    laws: list = field(default_factory=list)
    renewal: object = None
    status: str = STATUS.COMPLETE


def horizon_ladder(n):
    return sorted(set(max(n // d, 2) for d in LADDER_DIVISORS))


def collect_samples(scenario, block_size, threads):
    """Merged blocks up to the one reaching the target; (result, complete)."""
    n_blocks = int(math.ceil(scenario.max_trials / float(block_size)))
    merged = BlockResult(0, [])

    def run(index):
        return run_trial_block_task.apply(
            args=(scenario, index, block_size)).get()

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start in range(0, n_blocks, threads):
            indices = range(start, min(start + threads, n_blocks))
            for result in pool.map(run, indices):
                merged.merge(result)
                if merged.accepted >= scenario.target_accepted:
                    return merged, True
    return merged, False


def _context(scenario, accepted):
    return dict(n=scenario.n, k=scenario.k, r=scenario.r, t=scenario.t,
                accepted=accepted)


def _renewal(config, stream, minimum_top=0.0):
    spec = config.spec
    horizon = settings.REDUCED_BPRE['RENEWAL_HORIZON']
    top = max(RENEWAL_TOP_FRACTION * norming(spec, horizon), minimum_top)
    grid = np.linspace(0.0, top, RENEWAL_GRID_POINTS)
    return renewal_table(spec, grid, settings.REDUCED_BPRE['RENEWAL_PATHS'],
                         horizon, generator(config.seed, stream, 0))


def reference_law(config):
    """Limit law table the regime's observable is compared against."""
    spec, regime = config.spec, config.scenario
    ensemble = meander = None
    exact = regime == REGIME.THM1 and spec.is_gaussian and spec.c == 0.5
    if regime in (REGIME.THM1, REGIME.THM2) and not exact:
        ensemble = shared_ensemble(spec, generator(config.seed, STREAM.LAW, 0))
    if regime in (REGIME.THM3_K_GG_R, REGIME.THM3_THETA_R):
        z = np.linspace(0.0, MEANDER_Z_MAX, MEANDER_Z_POINTS)
        density = meander_density(spec, z, settings.REDUCED_BPRE['MEANDER_PATHS'],
                                  generator(config.seed, STREAM.MEANDER, 0))
        meander = MeanderTable(z, density, spec.alpha_one_minus_rho)
    return theorem_reference(
        regime, spec, config.t, config.theta, ensemble=ensemble,
        meander=meander, meander_s=config.meander_s,
        rng=generator(config.seed, STREAM.MEANDER, 1),
        n_paths=settings.REDUCED_BPRE['MEANDER_PATHS'])


def _diagnostics_rows(regime, report, context):
    value, halfwidth = report.delta_q95
    rows = [
        ReportRow.interval(regime, CHECK.DELTA, 'q95 |Delta|/a', value, halfwidth,
                           reference='<= %g' % DELTA_Q95_MAX,
                           passed=value <= DELTA_Q95_MAX, **context),
        ReportRow(regime, CHECK.BINOMIAL, 'P(binomial deviation < 2)',
                  report.binomial_below_two,
                  reference='>= %g' % BINOMIAL_BELOW_TWO_MIN,
                  passed=report.binomial_below_two >= BINOMIAL_BELOW_TWO_MIN,
                  **context),
        ReportRow(regime, CHECK.DELTA_IDENTITY, 'max |Delta - recomputed|',
                  report.delta_mismatch,
                  reference='<= %g' % DELTA_IDENTITY_TOLERANCE,
                  passed=report.delta_mismatch <= DELTA_IDENTITY_TOLERANCE,
                  **context),
    ]
    return rows


def genealogy_rows(config):
    """Conditional-mean identity of Z_rn on whole trees, and the closed-form
    survival for linear-fractional laws."""
    regime = config.scenario
    rng = generator(config.seed, STREAM.GENEALOGY, 0)
    try:
        env = draw_environment(config.model, GENEALOGY_GENERATIONS, rng)
        report = genealogy_check(env, GENEALOGY_TREES, rng)
    except (ParameterOverflow, PopulationOverflow) as e:
        logger.warning('no genealogy check: %s', e)
        return []
    rows = [ReportRow.interval(
        regime, CHECK.GENEALOGY, 'mean Z_rn - Z_r P(survive)', report.residual,
        normal_quantile() * report.stderr, reference='0',
        passed=(abs(report.residual) <=
                IDENTITY_SIGMAS * report.stderr + DELTA_IDENTITY_TOLERANCE),
        n=env.n, r=report.r)]
    if report.closed_form_gap is not None:
        rows.append(ReportRow(
            regime, CHECK.CLOSED_FORM, 'max |recursion - closed form|',
            report.closed_form_gap, reference='<= %g' % DELTA_IDENTITY_TOLERANCE,
            passed=report.closed_form_gap <= DELTA_IDENTITY_TOLERANCE, n=env.n))
    return rows


def theorem_pipeline(config, result):
    regime = config.scenario
    reference = reference_law(config)
    result.laws.append(reference)
    mass = reference.values[-1]
    result.rows.append(ReportRow.interval(
        regime, CHECK.LAW_MASS, '%s at grid end' % reference.law_id, mass,
        reference.errors[-1], reference='1',
        passed=abs(1 - mass) <= PROPERNESS_TOLERANCE + reference.errors[-1],
        t=config.t))

    tolerance = KS_TOLERANCE[regime] + float(reference.errors.max())
    distances, bands, reports = [], [], []
    ladder = horizon_ladder(config.n)
    for n in ladder:
        scenario = config.scenario_spec(n)
        merged, complete = collect_samples(scenario, config.block_size,
                                           config.threads)
        context = _context(scenario, merged.accepted)
        logger.info('%s n=%d: accepted %d of %d trials, %d extinct by r, '
                    '%d overflowed', regime, n, merged.accepted,
                    merged.attempted, merged.extinct_by_r, merged.overflow)
        if merged.overflow:
            logger.warning('%d trials passed the population cap', merged.overflow)
        if not complete:
            result.status = STATUS.PARTIAL
            result.rows.append(ReportRow(
                regime, CHECK.BUDGET, 'accepted', merged.accepted,
                reference='>= %d' % scenario.target_accepted, passed=False,
                **context))
            logger.warning('%s n=%d: budget of %d trials exhausted', regime, n,
                           scenario.max_trials)
        if not merged.accepted:
            continue

        ecdf = Ecdf(scenario.observable(merged.samples))
        distance = ks_distance(ecdf, reference)
        distances.append(distance)
        bands.append(ecdf.band)
        top = n == ladder[-1]
        result.rows.append(ReportRow(
            regime, regime, 'ks', distance, distance - ecdf.band,
            distance + ecdf.band, reference='%s <= %.3g' % (reference.law_id, tolerance),
            passed=distance <= tolerance or not top, **context))
        if top:
            result.samples = merged.samples

        try:
            report = diagnostics_check(merged.samples, scenario)
        except InsufficientSamples as e:
            logger.warning('no diagnostics at n=%d: %s', n, e)
        else:
            reports.append(report)
            result.rows.extend(_diagnostics_rows(regime, report, context))

    if len(distances) == len(ladder):
        result.rows.append(ReportRow(
            regime, regime, 'ks trend', distances[-1], reference='nonincreasing',
            passed=trend_monotone(distances, bands), n=config.n, t=config.t))
    if len(reports) == len(ladder):
        delta_ok, binomial_ok = diagnostics_trend(reports)
        result.rows.append(ReportRow(
            regime, CHECK.DELTA, 'q95 |Delta|/a trend', reports[-1].delta_q95[0],
            reference='nonincreasing', passed=delta_ok, n=config.n, t=config.t))
        result.rows.append(ReportRow(
            regime, CHECK.BINOMIAL, 'q95 binomial deviation trend',
            reports[-1].binomial_q95[0], reference='nonincreasing',
            passed=binomial_ok, n=config.n, t=config.t))
    result.rows.extend(genealogy_rows(config))


def exp_functional_row(config):
    """Boundedness of j^(1/alpha + 1) E[e^{S_j}; M_j < 0] in j."""
    spec = config.spec
    j_grid = geometric_abscissae(EXP_FUNCTIONAL_J[0], EXP_FUNCTIONAL_J[1],
                                 EXP_FUNCTIONAL_POINTS)
    j_grid, scaled, errors = scaled_exp_functional(
        spec, j_grid, settings.REDUCED_BPRE['EVENT_TRIALS'],
        generator(config.seed, STREAM.EXP_FUNCTIONAL, 0))
    z = normal_quantile()
    spread = float(scaled.max() / scaled.min())
    top, bottom = scaled.argmax(), scaled.argmin()
    # the spread the intervals cannot rule out
    least = (scaled[top] - z * errors[top]) / (scaled[bottom] + z * errors[bottom])
    return ReportRow(
        config.scenario, CHECK.EXP_FUNCTIONAL, 'max / min of scaled E[e^S; M < 0]',
        spread, reference='<= %g' % EXP_FUNCTIONAL_SPREAD,
        passed=bool(scaled.min() > 0 and least <= EXP_FUNCTIONAL_SPREAD),
        n=int(j_grid[-1]))


def walk_pipeline(config, result):
    spec, regime = config.spec, config.scenario
    ladder = horizon_ladder(config.n)
    thresholds = dict((n, config.scenario_spec(n).walk_threshold) for n in ladder)
    table = _renewal(config, STREAM.RENEWAL, 1.5 * max(thresholds.values()))
    result.renewal = table
    z = normal_quantile()
    rng = generator(config.seed, STREAM.WALK, 0)
    paths = settings.REDUCED_BPRE['RENEWAL_PATHS']

    for side, expected in ((SIDE.PLUS, spec.rho), (SIDE.MINUS, 1 - spec.rho)):
        value, stderr = ladder_tail_index(spec, side, paths, config.n, rng)
        result.rows.append(ReportRow.interval(
            regime, CHECK.LADDER_TAIL, 'tau_1 %s' % side, value, z * stderr,
            reference='%.4f' % expected,
            passed=abs(value - expected) <= EXPONENT_TOLERANCE + z * stderr,
            n=config.n))
    for side, expected in ((SIDE.PLUS, spec.alpha_rho),
                           (SIDE.MINUS, spec.alpha_one_minus_rho)):
        value, stderr = renewal_exponent(table, side)
        result.rows.append(ReportRow.interval(
            regime, CHECK.RENEWAL_EXPONENT, 'V %s' % side, value, z * stderr,
            reference='%.4f' % expected,
            passed=abs(value - expected) <= EXPONENT_TOLERANCE + z * stderr))

    ratio = asympv_ratio(table, 0.9 * table.grid[-1], spec.alpha_rho)
    result.rows.append(ReportRow(
        regime, CHECK.RENEWAL_ASYMPTOTICS, 'AsympV ratio', ratio,
        reference='[%g, %g]' % ASYMPV_RATIO,
        passed=ASYMPV_RATIO[0] <= ratio <= ASYMPV_RATIO[1]))
    for side in (SIDE.PLUS, SIDE.MINUS):
        strict, weak = strict_renewal(table, side)
        gap = float(np.max(np.abs(strict - weak)) / np.max(weak))
        result.rows.append(ReportRow(
            regime, CHECK.STRICT_RENEWAL, 'relative gap %s' % side, gap,
            reference='<= %g' % STRICT_RENEWAL_TOLERANCE,
            passed=gap <= STRICT_RENEWAL_TOLERANCE))

    result.rows.append(exp_functional_row(config))

    deviations, halfwidths = [], []
    trials = settings.REDUCED_BPRE['EVENT_TRIALS']
    for n in ladder:
        scenario = config.scenario_spec(n)
        estimate = event_b_probability(spec, thresholds[n], n, trials, rng, table)
        value, halfwidth = estimate.ratio, estimate.ratio_halfwidth
        deviations.append(abs(value - 1))
        halfwidths.append(halfwidth)
        low, high = EVENT_B_RATIO
        result.rows.append(ReportRow.interval(
            regime, CHECK.EVENT_B, 'P(B) / prediction', value, halfwidth,
            reference='[%g, %g]' % EVENT_B_RATIO,
            passed=(low - halfwidth <= value <= high + halfwidth or
                    n != ladder[-1]),
            n=n, k=scenario.k, t=config.t))
    result.rows.append(ReportRow(
        regime, CHECK.EVENT_B, '|ratio - 1| trend', deviations[-1],
        reference='nonincreasing', passed=trend_monotone(deviations, halfwidths),
        n=config.n, t=config.t))


def theta_pipeline(config, result):
    regime, model = config.scenario, config.model
    ladder = horizon_ladder(config.n)
    table = _renewal(config, STREAM.RENEWAL)
    result.renewal = table
    estimate = estimate_theta(
        model, ladder, lambda n: schedule(REGIME.THM1, n)[0], config.t,
        generator(config.seed, STREAM.THETA, 0), table=table,
        n_trials=config.trials)

    for n, value, halfwidth in estimate.ratio:
        result.rows.append(ReportRow.interval(
            regime, CHECK.THETA_RATIO, 'P(R) / P(B)', value, halfwidth,
            reference='positive', passed=value > 0, n=n, t=config.t))
    spread = estimate.ratio_spread()
    result.rows.append(ReportRow(
        regime, CHECK.THETA_RATIO, 'relative spread over n', spread,
        reference='<= %g' % THETA_RATIO_SPREAD,
        passed=spread <= THETA_RATIO_SPREAD, n=config.n, t=config.t))

    top = estimate.ratio[-1][1]
    halfwidth = normal_quantile() * estimate.series_stderr
    agreement = abs(estimate.series - top) / top
    result.rows.append(ReportRow.interval(
        regime, CHECK.THETA_SERIES, 'series (J=%d, K=%d)' % estimate.truncation,
        estimate.series, halfwidth,
        reference='within %g of ratio %.4f' % (THETA_SERIES_AGREEMENT, top),
        passed=agreement <= THETA_SERIES_AGREEMENT + halfwidth / top,
        n=config.n, t=config.t))
    result.rows.append(ReportRow(
        regime, CHECK.THETA_BOUND, 'series upper bound', estimate.sparr_bound,
        reference='>= series',
        passed=estimate.series - halfwidth <= estimate.sparr_bound,
        n=config.n, t=config.t))
    if estimate.truncated_events:
        logger.warning('series truncated at %d ladder epochs',
                       estimate.truncated_events)


def run_scenario(config):
    """Run the pipeline of ``config.scenario``; the result carries report
    rows, accepted samples and the tables behind them."""
    logger.info('run %s n=%d seed=%d on %d threads', config.scenario, config.n,
                config.seed, config.threads)
    result = RunResult(config)
    if config.scenario == SCENARIO.THETA:
        theta_pipeline(config, result)
    elif config.scenario == REGIME.WALK_ONLY:
        walk_pipeline(config, result)
    else:
        theorem_pipeline(config, result)
    logger.info('run %s finished: %d rows, %d failing, status %s',
                config.scenario, len(result.rows),
                sum(1 for row in result.rows if not row.passed), result.status)
    return result
