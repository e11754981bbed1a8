from dataclasses import dataclass

REPORT_COLUMNS = [
    'scenario', 'theorem', 'n', 'k', 'r', 't', 'accepted',
    'statistic', 'value', 'ci_low', 'ci_high', 'reference', 'pass',
]


@dataclass(frozen=True)
class ReportRow:
    scenario: str
    theorem: str
    statistic: str
    value: float
    ci_low: float = None
    ci_high: float = None
    reference: str = ''
    passed: bool = True
    n: int = None
    k: int = None
    r: int = None
    t: float = None
    accepted: int = None

    @classmethod
    def interval(cls, scenario, theorem, statistic, value, halfwidth, **kwargs):
        return cls(scenario, theorem, statistic, value,
                   value - halfwidth, value + halfwidth, **kwargs)


def all_passed(rows):
    return all(row.passed for row in rows)


def failing(rows):
    return [row for row in rows if not row.passed]
