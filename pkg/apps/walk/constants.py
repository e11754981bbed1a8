class SIDE:
    PLUS = 'plus'
    MINUS = 'minus'

    CHOICES = (
        (PLUS, 'ascending ladder / V+'),
        (MINUS, 'descending ladder / V-'),
    )


class METHOD:
    REJECTION = 'rejection'
    H_TRANSFORM = 'h-transform'

    CHOICES = (
        (REJECTION, 'rejection (reference)'),
        (H_TRANSFORM, 'h-transform with truncated increments'),
    )

    DEFAULT = H_TRANSFORM


MIN_LADDER_SAMPLES = 1000
REGRESSION_POINTS = 20
WALK_CHUNK = 2000
REJECTION_ROUNDS = 2000
# resample once the effective size drops below this share of the paths
RESAMPLE_FRACTION = 0.5
REPLICATES = 10
RENEWAL_LATTICE = 4000
