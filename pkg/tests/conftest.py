import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from typact.group_model import OMEGA, group

settings.register_profile("default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PRIMES = [2, 3, 5]
extent = st.one_of(st.integers(0, 3), st.just(OMEGA))


@st.composite
def descriptions(draw, bounded=False, finite=False):
    """Random normalized descriptions over small primes and exponents."""
    cyc = {}
    for p in draw(st.lists(st.sampled_from(PRIMES), max_size=2, unique=True)):
        for k in draw(st.lists(st.integers(1, 3), max_size=3, unique=True)):
            cyc[(p, k)] = draw(st.integers(0, 3) if finite else extent)
    if bounded or finite:
        return group(cyclic=cyc)
    free = draw(extent)
    pru = {p: draw(extent) for p in draw(st.lists(st.sampled_from(PRIMES), max_size=1, unique=True))}
    towers = draw(st.lists(st.sampled_from(PRIMES), max_size=1, unique=True))
    return group(free, cyc, pru, towers)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
