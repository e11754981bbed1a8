class REGIME:
    THM1 = 'thm1'
    THM2 = 'thm2'
    THM3_K_GG_R = 'thm3_k_gg_r'
    THM3_THETA_R = 'thm3_theta_r'
    THM3_MIN_GG_K = 'thm3_min_gg_k'
    WALK_ONLY = 'walk_only'
    MEANDER = 'meander'
    EXPLICIT = 'explicit'

    CHOICES = (
        (THM1, 'n >> k >> m = n - r'),
        (THM2, 'k ~ theta m'),
        (THM3_K_GG_R, 'k >> r'),
        (THM3_THETA_R, 'k ~ theta r'),
        (THM3_MIN_GG_K, 'min(r, n - r) >> k'),
        (WALK_ONLY, 'associated walk only'),
        (MEANDER, 'r = [sn], no constraint on S_n'),
        (EXPLICIT, 'k, r and threshold given'),
    )

    THEOREM3 = (THM3_K_GG_R, THM3_THETA_R, THM3_MIN_GG_K)


# regime -> exponents of n for (m or r) and k
SCHEDULE_EXPONENTS = {
    REGIME.THM1: (0.35, 0.65),
    REGIME.THM2: (0.5, None),
    REGIME.THM3_K_GG_R: (0.3, 0.6),
    REGIME.THM3_THETA_R: (0.5, None),
    REGIME.THM3_MIN_GG_K: (None, 0.4),
    REGIME.WALK_ONLY: (None, 0.65),
}

SAMPLE_SCHEMA_VERSION = 1
SAMPLE_COLUMNS = [
    'trial_index', 'S_r', 'S_n', 'S_tau', 'tau_rn',
    'Z_r', 'q_rn', 'Z_rn', 'O_rn', 'Delta_rn',
]

BRUTE_FORCE_MAX_N = 6
BRUTE_FORCE_MAX_STATES = 10 ** 7
BRUTE_FORCE_CAP = 60

MIN_DIAGNOSTIC_SAMPLES = 1000
TREE_MAX_PARTICLES = 10 ** 6

# genealogy check: whole trees on one environment of this many generations
GENEALOGY_GENERATIONS = 20
GENEALOGY_TREES = 2000

# leading counter of trial streams; auxiliary streams start at 1
TRIAL_STREAM = 0
