from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def rationals(draw, lo=Fraction(1, 50), hi=Fraction(1), max_den=40):
    den = draw(st.integers(1, max_den))
    num = draw(st.integers(1, den))
    q = Fraction(num, den)
    lo_, hi_ = Fraction(lo), Fraction(hi)
    return min(max(q, lo_), hi_)


@st.composite
def distributions(draw, min_size=2, max_size=5, max_weight=20):
    """Random full distributions with small integer weights."""
    weights = draw(st.lists(st.integers(1, max_weight), min_size=min_size,
                            max_size=max_size))
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
