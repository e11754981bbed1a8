from dataclasses import dataclass, field

import numpy as np

from apps.limits.constants import MONOTONE_SLACK


@dataclass(frozen=True)
class LimitLawTable:
    """A limit distribution tabulated along its argument."""
    law_id: str
    grid: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    parameter: float = None
    method: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        errors = np.broadcast_to(np.asarray(self.errors, dtype=float), grid.shape)
        if grid.shape != values.shape:
            raise ValueError('one value per grid point')
        if np.any(np.diff(grid) <= 0):
            raise ValueError('law grid must increase')
        if np.any(np.diff(values) < -MONOTONE_SLACK - errors[1:]):
            raise ValueError('%s values decrease along the grid' % self.law_id)
        object.__setattr__(self, 'grid', grid)
        object.__setattr__(self, 'values', np.clip(values, 0.0, 1.0))
        object.__setattr__(self, 'errors', np.array(errors))

    def __call__(self, y):
        return np.interp(y, self.grid, self.values,
                         left=self.values[0], right=self.values[-1])

    def rows(self):
        for y, value, error in zip(self.grid, self.values, self.errors):
            yield {'law_id': self.law_id, 'arg1': float(y), 'arg2': self.parameter,
                   'value': float(value), 'error': float(error)}


def tabulate(law_id, evaluate, grid, parameter=None, **method):
    """Table of ``evaluate(y) -> (value, error)`` over ``grid``."""
    pairs = [evaluate(y) for y in grid]
    values = np.array([v for v, _ in pairs])
    errors = np.array([e for _, e in pairs])
    return LimitLawTable(law_id, grid, values, errors, parameter, method)
