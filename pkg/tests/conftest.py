import numpy as np
import pytest

import lqnet as L


def two_player(alpha=0.5, box=(0.0, 10.0)):
    """Q = I, theta = (1, 1) over the single-edge network."""
    spec = L.GameSpec(q=np.ones((2, 1, 1)), theta=[1.0, 1.0], alpha=alpha,
                      boxes=(L.StrategyBox([box[0]], [box[1]]),) * 2)
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    return spec, A


@pytest.fixture
def pair():
    return two_player()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_profile(rng, spec):
    return rng.uniform(spec.lo, spec.hi)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    criterion = getattr(getattr(item, "function", None), "criterion", None)
    if criterion is not None and report.when == "call":
        report.user_properties.append(("criterion", criterion))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for status in ("passed", "failed"):
        for report in terminalreporter.stats.get(status, []):
            for key, value in getattr(report, "user_properties", []):
                if key == "criterion":
                    lines.append((value[0], f"criterion {value[0]:>2}: {'PASS' if status == 'passed' else 'FAIL'}  {value[1]}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
