import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from renormalg.scalars import LaurentRing

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

RING = LaurentRing(8, 8)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def laurents(draw, lo=-3, hi=3, ring=RING):
    exps = draw(st.lists(st.integers(lo, hi), max_size=4, unique=True))
    return ring.element({k: draw(rationals) for k in exps})


@pytest.fixture
def rng():
    return random.Random(1234)


def frac(text):
    return Fraction(text)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)
