import pytest

from localdrr.nilring import QQ, RingSpec
from localdrr.parser import parse_ring, parse_value

DUAL = parse_ring("Q[e^2=0]")
DUAL2 = parse_ring("Q[e^2=0, d^2=0]")
DUAL3 = parse_ring("Q[e^3=0]")
TWO_EPS = parse_ring("Q[e1^2=0, e2^2=0]")
GROUP_RING = parse_ring("Q[e1^3=0, e2^2=0]")


def S(text: str, ring: RingSpec = QQ):
    """Series from its printed form."""
    return parse_value(text, "series", ring)


def E(text: str, ring: RingSpec = QQ):
    """Ring element from its printed form."""
    return parse_value(text, "elem", ring)


def G(text: str, ring: RingSpec = QQ):
    return parse_value(text, "group", ring)


def L(text: str, ring: RingSpec = QQ):
    return parse_value(text, "lie", ring)


@pytest.fixture(scope="session")
def rings():
    return {"Q": QQ, "dual": DUAL, "dual2": DUAL2, "dual3": DUAL3, "two_eps": TWO_EPS, "group": GROUP_RING}


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
