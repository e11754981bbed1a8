class LAW:
    Q_MIN = 'Q_min'
    A = 'A'
    A2 = 'A2'
    W = 'W'
    H_CSTAR = 'H_Cstar'
    TAIL_CLOSED = 'tail_closed'
    MEANDER_MIN_AFTER = 'meander_min_after'

    CHOICES = (
        (Q_MIN, 'P(min Y <= z)'),
        (A, 'A(T, y)'),
        (A2, 'A2(t, theta, z)'),
        (W, 'W(t, y)'),
        (H_CSTAR, 'C** H(y)'),
        (TAIL_CLOSED, '1 - (1 - (t ^ y) / t)^(alpha rho + 1)'),
        (MEANDER_MIN_AFTER, 'P(inf_{s <= q <= 1} B+_q <= x)'),
    )


LAW_COLUMNS = ['law_id', 'arg1', 'arg2', 'value', 'error']

# monotonicity slack for tables built by quadrature
MONOTONE_SLACK = 1e-9
MIN_EFFECTIVE_PATHS = 100
