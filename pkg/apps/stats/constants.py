# two-sided level of every confidence statement in reports
CONFIDENCE = 0.99
DKW_DELTA = 0.01

MIN_FIT_POINTS = 5
MIN_TREND_POINTS = 3
