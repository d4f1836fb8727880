import pytest
from hypothesis import strategies as st

from scc_transport import CauseProbabilities, causes_to_table, metrics

# open-interval probabilities kept a little away from 0 and 1
prob = st.floats(min_value=1e-6, max_value=1 - 1e-6, allow_nan=False)
causes_st = st.builds(CauseProbabilities, prob, prob, prob)

ROW1 = CauseProbabilities(0.25, 0.75, 0.5)
TARGET = CauseProbabilities(1 / 3, 0.8, 2 / 3)
TARGET_PREV = 28 / 45


@pytest.fixture
def row1():
    return ROW1


@pytest.fixture
def row1_metrics():
    return metrics(causes_to_table(ROW1))


ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (len(k), k)):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
