class FAMILY:
    LINEAR_FRACTIONAL = 'linear_fractional'
    POISSON = 'poisson'

    CHOICES = (
        (LINEAR_FRACTIONAL, 'linear-fractional (geometric) offspring'),
        (POISSON, 'Poisson offspring'),
    )

    # F''(1) / F'(1)^2, constant within each family
    ETA = {
        LINEAR_FRACTIONAL: 2.0,
        POISSON: 1.0,
    }

    DEFAULT = LINEAR_FRACTIONAL


# environments with |log F'(1)| beyond this are discarded
OVERFLOW_LOG = 700.0

DEFAULT_KAPPA = 1.0

# below this mean the Poisson survival update uses its series form
POISSON_SERIES_CUTOFF = 1e-8
