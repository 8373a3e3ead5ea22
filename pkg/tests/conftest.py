import re

import pytest

from coopex.instance import NetworkInstance, complete_graph, line_graph


def pytest_runtest_logreport(report):
    """One PASS/FAIL line per acceptance criterion, outside capture."""
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m or report.when != "call":
        return
    num = int(m.group(1))
    line = f"acceptance criterion {num:02d}: {'PASS' if report.passed else 'FAIL'}"
    if report.passed:
        try:
            from test_acceptance import DETAILS
            if DETAILS.get(num):
                line += f"  ({DETAILS[num]})"
        except ImportError:
            pass
    print(f"\n{line}", flush=True)


@pytest.fixture
def line3():
    """Three nodes on a line; ends hold one packet each, middle holds none."""
    return NetworkInstance(
        n=3, k=2, edges=line_graph(3),
        holdings=(frozenset({0}), frozenset(), frozenset({1})),
    )


@pytest.fixture
def clique3():
    """Fully connected triangle; node i misses exactly packet i."""
    return NetworkInstance(
        n=3, k=3, edges=complete_graph(3),
        holdings=tuple(frozenset({0, 1, 2}) - {i} for i in range(3)),
    )
