from apps.bpre.constants import REGIME


class SCENARIO:
    THETA = 'theta'

    CHOICES = tuple(
        (value, label) for value, label in REGIME.CHOICES
        if value != REGIME.EXPLICIT
    ) + ((THETA, 'constant Theta, ratio and series'),)

    THEOREMS = (
        REGIME.THM1, REGIME.THM2, REGIME.THM3_K_GG_R, REGIME.THM3_THETA_R,
        REGIME.THM3_MIN_GG_K, REGIME.MEANDER,
    )


class FORMAT:
    CSV = 'csv'
    JSON = 'json'

    CHOICES = (
        (CSV, 'CSV with a commented header'),
        (JSON, 'JSON document'),
    )


class EXIT:
    PASS = 0
    STATISTICAL_FAILURE = 1
    CONFIG_ERROR = 2


# largest KS distance accepted between a regime's ecdf and its limit law
KS_TOLERANCE = {
    REGIME.THM1: 0.15,
    REGIME.THM2: 0.2,
    REGIME.THM3_K_GG_R: 0.2,
    REGIME.THM3_THETA_R: 0.2,
    REGIME.THM3_MIN_GG_K: 0.15,
    REGIME.MEANDER: 0.15,
}

# the trend ladder runs over n / LADDER_DIVISORS
LADDER_DIVISORS = (4, 2, 1)

# second counter of the random streams that are not trials; trials use 0
class STREAM:
    LAW = 1
    RENEWAL = 2
    MEANDER = 3
    WALK = 4
    THETA = 5
    EXP_FUNCTIONAL = 6
    GENEALOGY = 7


EVENT_B_RATIO = (0.85, 1.15)
ASYMPV_RATIO = (0.95, 1.05)
EXPONENT_TOLERANCE = 0.1
PROPERNESS_TOLERANCE = 0.02
THETA_RATIO_SPREAD = 0.2
THETA_SERIES_AGREEMENT = 0.25

MEANDER_Z_MAX = 6.0
MEANDER_Z_POINTS = 241
RENEWAL_GRID_POINTS = 200
# renewal grids reach this fraction of a_horizon
RENEWAL_TOP_FRACTION = 0.25
STRICT_RENEWAL_TOLERANCE = 0.05

# j^(1/alpha + 1) E[e^{S_j}; M_j < 0] over j in EXP_FUNCTIONAL_J may vary by
# at most this factor
EXP_FUNCTIONAL_J = (10, 1000)
EXP_FUNCTIONAL_POINTS = 8
EXP_FUNCTIONAL_SPREAD = 2.0

DELTA_Q95_MAX = 0.5
BINOMIAL_BELOW_TWO_MIN = 0.75
DELTA_IDENTITY_TOLERANCE = 1e-6
# standard errors allowed to a residual whose mean is exactly zero
IDENTITY_SIGMAS = 4


class STATUS:
    COMPLETE = 'complete'
    PARTIAL = 'partial'


class CHECK:
    """Identifiers carried in the theorem column of non-limit-law rows."""
    BUDGET = 'acceptance_budget'
    LAW_MASS = 'limit_law_mass'
    DELTA = 'delta_negligible'
    BINOMIAL = 'binomial_concentration'
    DELTA_IDENTITY = 'delta_identity'
    LADDER_TAIL = 'ladder_tail_index'
    RENEWAL_EXPONENT = 'renewal_exponent'
    RENEWAL_ASYMPTOTICS = 'renewal_asymptotics'
    STRICT_RENEWAL = 'strict_renewal'
    EXP_FUNCTIONAL = 'exp_functional'
    GENEALOGY = 'genealogy_identity'
    CLOSED_FORM = 'closed_form_survival'
    EVENT_B = 'event_b_asymptotics'
    THETA_RATIO = 'theta_ratio'
    THETA_SERIES = 'theta_series'
    THETA_BOUND = 'theta_upper_bound'


# config keys that steer execution only and stay out of the output header
EXECUTION_KEYS = ('threads', 'out_dir', 'format')
