import numpy as np
import pytest

from qstem_ris import PropagationConfig, SystemDims, derive_seed, sample_channels


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def channels():
    """Factory for reproducible channel draws under the reference propagation setup."""

    def make(n, l, k, seed=0):  # noqa: E741
        return sample_channels(SystemDims(n, l, k), PropagationConfig(), derive_seed(seed, 0))

    return make


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    num, title = marker.args
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    prev = _CRITERIA.get(num)
    if prev is None or prev[1] == "passed":
        _CRITERIA[num] = (title, rep.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_CRITERIA):
        title, outcome, detail = _CRITERIA[num]
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{tag}] {num:>2}. {title}" + (f"  ({detail})" if detail else ""))
