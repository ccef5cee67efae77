import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from lctcalc.bivar import BivarPoly  # noqa: E402

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_ints = st.integers(min_value=-9, max_value=9)
rationals = st.fractions(min_value=-9, max_value=9, max_denominator=6)
nonzero_rationals = rationals.filter(lambda r: r != 0)


@st.composite
def polys(draw, max_deg: int = 5, max_terms: int = 6, min_order: int = 0):
    monos = [
        (p, q) for p in range(max_deg + 1) for q in range(max_deg + 1 - p) if p + q >= min_order
    ]
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=max_terms, unique=True))
    coeffs = draw(st.lists(nonzero_rationals, min_size=len(chosen), max_size=len(chosen)))
    return BivarPoly(dict(zip(chosen, coeffs)))


@st.composite
def germs(draw, max_deg: int = 5, max_terms: int = 5):
    """Polynomials vanishing at the origin with integer coefficients."""
    monos = [(p, q) for p in range(max_deg + 1) for q in range(max_deg + 1 - p) if p + q >= 1]
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=max_terms, unique=True))
    coeffs = draw(
        st.lists(small_ints.filter(bool), min_size=len(chosen), max_size=len(chosen))
    )
    return BivarPoly(dict(zip(chosen, coeffs)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
