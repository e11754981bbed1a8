import os.path

APP_ROOT = os.path.normpath(os.path.dirname(__file__))


class PRESET:
    NORMAL = 'normal'
    SYMMETRIC_15 = 'sym1.5'
    SKEWED_15 = 'skew1.5'
    SYMMETRIC_08 = 'sym0.8'

    # name -> (alpha, beta)
    PARAMETERS = {
        NORMAL: (2.0, 0.0),
        SYMMETRIC_15: (1.5, 0.0),
        SKEWED_15: (1.5, 0.4),
        SYMMETRIC_08: (0.8, 0.0),
    }

    CHOICES = (
        (NORMAL, 'alpha=2, beta=0'),
        (SYMMETRIC_15, 'alpha=1.5, beta=0'),
        (SKEWED_15, 'alpha=1.5, beta=0.4'),
        (SYMMETRIC_08, 'alpha=0.8, beta=0'),
    )

    DEFAULT = NORMAL


# integrand of the inversion integrals is cut where exp(-c w^alpha) < TAIL
INVERSION_TAIL = 1e-10
QUAD_TOLERANCE = 1e-9

# negative half-line grid for the tabulated cdf used by conditioned walks
CDF_TABLE_MAX = 1e3
CDF_TABLE_POINTS = 400

DEFAULT_GRID_SIZE = 1000
PATH_CHUNK = 5000
