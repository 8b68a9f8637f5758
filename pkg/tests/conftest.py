import numpy as np
import pytest

from cubicalg import make_counterexample, make_hadamard

ACCEPTANCE = []


def record(criterion, ok, detail=""):
    ACCEPTANCE.append((criterion, bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def hadamard3():
    return make_hadamard(3)


@pytest.fixture
def ce2():
    # a_2 = 1/4
    from cubicalg import CounterexampleParams
    return make_counterexample(CounterexampleParams(2, (0.25,)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
