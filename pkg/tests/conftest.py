import pytest
from hypothesis import settings, strategies as st

from drs import fixtures
from drs.relcore import FiniteRelationSpace

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ex1():
    return fixtures.space("EX1")


@pytest.fixture(scope="session")
def table1():
    return fixtures.groupoid("TABLE1")


@st.composite
def spaces(draw, min_n=1, max_n=4, reflexive=False):
    n = draw(st.integers(min_n, max_n))
    universe = tuple(str(i + 1) for i in range(n))
    pairs = {(a, b) for a in universe for b in universe
             if (reflexive and a == b) or draw(st.booleans())}
    return FiniteRelationSpace(universe, frozenset(pairs))


@st.composite
def up_directed_spaces(draw, min_n=1, max_n=4, reflexive=False):
    """Random relations made up-directed by adding a common top successor."""
    s = draw(spaces(min_n, max_n, reflexive))
    top = s.universe[-1]
    pairs = set(s.relation) | {(x, top) for x in s.universe}
    return FiniteRelationSpace(s.universe, frozenset(pairs))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance
    results = test_acceptance.RESULTS
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {detail}")
