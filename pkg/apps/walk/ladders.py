import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from apps.walk.constants import MIN_LADDER_SAMPLES, RENEWAL_LATTICE, SIDE
from apps.walk.paths import WalkPath, iter_prefix_chunks
from reducedbpre.exceptions import GridRangeError, InsufficientSamples

logger = logging.getLogger('walk.ladders')

RENEWAL_COLUMNS = ['grid', 'v_plus', 'v_minus', 'zeta_plus', 'zeta_minus',
                   'n_samples']


@dataclass(frozen=True)
class LadderStats:
    """Weak ladder epochs and heights for k >= 1; tau_0 = H_0 = 0 implied."""
    desc_epochs: np.ndarray
    asc_epochs: np.ndarray
    desc_heights: np.ndarray
    asc_heights: np.ndarray

    def heights(self, side):
        return self.asc_heights if side == SIDE.PLUS else self.desc_heights

    def strict_heights(self, side):
        """Strict ladder heights: weak ones with a positive increment."""
        heights = self.heights(side)
        if not len(heights):
            return heights
        steps = np.diff(np.concatenate([[0.0], heights]))
        return heights[steps > 0]

    def ties(self, side):
        heights = self.heights(side)
        return int(np.sum(np.diff(np.concatenate([[0.0], heights])) == 0))


def _weak_records(prefix):
    """Indices i >= 1 with S_i >= max(S_0..S_{i-1})."""
    previous = np.maximum.accumulate(prefix)[:-1]
    return np.flatnonzero(prefix[1:] >= previous) + 1


def ladder_decompose(path):
    prefix = path.prefix
    if not len(prefix):
        raise ValueError('empty path')
    asc = _weak_records(prefix)
    desc = _weak_records(-prefix)
    asc_heights = prefix[asc]
    desc_heights = -prefix[desc]
    return LadderStats(desc, asc, desc_heights, asc_heights)


def sample_ladders(law, n_paths, horizon, rng):
    """Ladder decompositions of ``n_paths`` independent walks."""
    ladders = []
    for chunk in iter_prefix_chunks(law, horizon, n_paths, rng):
        for prefix in chunk:
            ladders.append(ladder_decompose(WalkPath.from_prefix(prefix)))
    logger.info('decomposed %d walks of length %d', n_paths, horizon)
    return ladders


@dataclass(frozen=True)
class RenewalTable:
    grid: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray
    zeta_plus: float
    zeta_minus: float
    n_ladder_samples: int
    truncated: int = 0
    v_plus_strict: np.ndarray = field(default=None, compare=False)
    v_minus_strict: np.ndarray = field(default=None, compare=False)
    exponent_plus: float = None
    exponent_minus: float = None

    def __post_init__(self):
        for column in (self.v_plus, self.v_minus):
            if np.any(np.diff(column) < 0):
                raise ValueError('renewal estimates must be nondecreasing')

    def zeta(self, side):
        """P(H_1 = 0) for the weak ladder of ``side``."""
        return self.zeta_plus if side == SIDE.PLUS else self.zeta_minus

    def column(self, side, strict=False):
        if strict:
            return self.v_plus_strict if side == SIDE.PLUS else self.v_minus_strict
        return self.v_plus if side == SIDE.PLUS else self.v_minus

    def value(self, side, x, extrapolate=False):
        """Linear interpolation of V(x); beyond the grid either an error or
        the power law x^exponent matched at the last grid point."""
        x = np.asarray(x, dtype=float)
        column = self.column(side)
        top = self.grid[-1]
        if np.any(x < self.grid[0]) or (not extrapolate and np.any(x > top)):
            raise GridRangeError(
                'V%s lookup outside [%g, %g]' % (
                    '+' if side == SIDE.PLUS else '-', self.grid[0], top))
        inside = np.interp(x, self.grid, column)
        if not extrapolate:
            return inside
        exponent = self.exponent_plus if side == SIDE.PLUS else self.exponent_minus
        beyond = column[-1] * (np.maximum(x, top) / top) ** (exponent or 1.0)
        return np.where(x <= top, inside, beyond)

    def v_plus_at(self, x, extrapolate=False):
        return self.value(SIDE.PLUS, x, extrapolate)

    def v_minus_at(self, x, extrapolate=False):
        return self.value(SIDE.MINUS, x, extrapolate)

    def reflected(self):
        """Table of the walk -S: the two sides swap."""
        return RenewalTable(
            self.grid, self.v_minus, self.v_plus, self.zeta_minus, self.zeta_plus,
            self.n_ladder_samples, self.truncated,
            self.v_minus_strict, self.v_plus_strict,
            self.exponent_minus, self.exponent_plus)

    def integral(self, side, x):
        """Trapezoid estimate of int_0^x V(u) du on the table nodes."""
        if x < 0:
            return 0.0
        if x > self.grid[-1]:
            raise GridRangeError('integral up to %g beyond grid' % x)
        nodes = np.concatenate([self.grid[self.grid < x], [x]])
        return float(integrate.trapezoid(self.value(side, nodes), nodes))

    def to_csv(self):
        out = io.StringIO()
        out.write('# renewal table, truncated=%d\n' % self.truncated)
        writer = csv.writer(out)
        writer.writerow(RENEWAL_COLUMNS)
        for x, vp, vm in zip(self.grid, self.v_plus, self.v_minus):
            writer.writerow([repr(float(x)), repr(float(vp)), repr(float(vm)),
                             repr(self.zeta_plus), repr(self.zeta_minus),
                             self.n_ladder_samples])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text, exponent_plus=None, exponent_minus=None):
        lines = [l for l in text.splitlines() if l and not l.startswith('#')]
        rows = list(csv.DictReader(lines))
        if not rows:
            raise ValueError('renewal table has no rows')
        column = lambda name: np.array([float(r[name]) for r in rows])
        return cls(column('grid'), column('v_plus'), column('v_minus'),
                   float(rows[0]['zeta_plus']), float(rows[0]['zeta_minus']),
                   int(rows[0]['n_samples']),
                   exponent_plus=exponent_plus, exponent_minus=exponent_minus)


def _first_heights(ladders, side, strict=False):
    """First ladder height of every walk that has one within its horizon."""
    first = []
    for l in ladders:
        heights = l.strict_heights(side) if strict else l.heights(side)
        if len(heights):
            first.append(heights[0])
    return np.asarray(first, dtype=float)


def renewal_function(heights, grid, lattice=RENEWAL_LATTICE):
    """V(x) = sum_k P(H_1 + ... + H_k <= x), k = 0 included, for iid H_i
    with the empirical law of ``heights``.

    Solves V = 1 + F * V on ``lattice`` cells up to the grid maximum;
    positive heights occupy at least the first cell, zero heights are the
    ties and give V(0) = 1 / (1 - zeta).
    """
    top = grid[-1]
    step = top / lattice if top > 0 else 1.0
    index = np.where(heights > 0, np.maximum(np.rint(heights / step), 1), 0)
    index = index.astype(int)
    pmf = np.bincount(index[index <= lattice], minlength=lattice + 1)
    pmf = pmf / float(len(heights))
    if pmf[0] >= 1:
        raise InsufficientSamples('every ladder height is a tie')
    values = np.empty(lattice + 1)
    for i in range(lattice + 1):
        values[i] = (1.0 + np.dot(pmf[1:i + 1], values[:i][::-1])) / (1 - pmf[0])
    return np.interp(grid, np.arange(lattice + 1) * step, values)


def estimate_renewal(ladders, grid, exponents=(None, None)):
    """Renewal tables from the first ladder heights of independent walks.

    Ladder height increments are iid, so V only needs the law of H_1;
    walks whose first ladder epoch falls beyond the horizon are dropped
    and counted as truncated.
    """
    ladders = list(ladders)
    if len(ladders) < MIN_LADDER_SAMPLES:
        raise InsufficientSamples(
            'need %d ladder sequences, got %d' % (MIN_LADDER_SAMPLES, len(ladders)))
    grid = np.asarray(grid, dtype=float)
    if np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        raise ValueError('grid must be increasing and nonnegative')

    columns, zeta = {}, {}
    truncated = 0
    for side in (SIDE.PLUS, SIDE.MINUS):
        weak = _first_heights(ladders, side)
        strict = _first_heights(ladders, side, strict=True)
        if 2 * len(strict) < len(ladders):
            raise InsufficientSamples(
                'only %d walks reached a %s ladder' % (len(strict), side))
        truncated = max(truncated, len(ladders) - len(strict))
        zeta[side] = float(np.mean(weak == 0))
        columns[side] = (renewal_function(weak, grid),
                         renewal_function(strict, grid))
    if truncated:
        logger.warning('%d of %d walks have no ladder height within the horizon',
                       truncated, len(ladders))

    return RenewalTable(
        grid, columns[SIDE.PLUS][0], columns[SIDE.MINUS][0],
        zeta[SIDE.PLUS], zeta[SIDE.MINUS], len(ladders),
        truncated=truncated,
        v_plus_strict=columns[SIDE.PLUS][1],
        v_minus_strict=columns[SIDE.MINUS][1],
        exponent_plus=exponents[0], exponent_minus=exponents[1],
    )


def renewal_table(spec, grid, n_paths, horizon, rng):
    """Renewal table of a stable law with its regular-variation exponents
    attached for extrapolation."""
    ladders = sample_ladders(spec, n_paths, horizon, rng)
    return estimate_renewal(
        ladders, grid, (spec.alpha_rho, spec.alpha_one_minus_rho))


def asympv_ratio(table, x, alpha_rho=None):
    """(alpha rho + 1) int_0^x V+ / (x V+(x)); tends to 1 as x grows."""
    if alpha_rho is None:
        alpha_rho = table.exponent_plus
    if not table.grid[0] < x <= table.grid[-1]:
        raise GridRangeError('x=%g outside (%g, %g]' % (
            x, table.grid[0], table.grid[-1]))
    return (alpha_rho + 1) * table.integral(SIDE.PLUS, x) / (
        x * float(table.v_plus_at(x)))
