import numpy as np
import pytest
from hypothesis import settings

from lowrepair import CodeParams, build_code

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# criterion number -> (description, [outcomes], [details])
_CRITERIA: dict[int, tuple[str, list[str], list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, text): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            num, text = m.args
            _CRITERIA.setdefault(num, (text, [], []))
            item.user_properties.append(("criterion", num))


def pytest_runtest_logreport(report):
    nums = [v for k, v in report.user_properties if k == "criterion"]
    if not nums:
        return
    _, outcomes, details = _CRITERIA[nums[0]]
    if report.when == "call" or report.outcome != "passed":
        outcomes.append(report.outcome)
    if report.when == "call":
        details += [v for k, v in report.user_properties if k == "detail"]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        text, outcomes, details = _CRITERIA[num]
        ok = outcomes and all(o == "passed" for o in outcomes)
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {text}")
        for d in details:
            terminalreporter.write_line(f"    {d}")


@pytest.fixture(scope="session")
def p105():
    return CodeParams(10, 5, 7, 1)


@pytest.fixture(scope="session")
def code105(p105):
    return build_code(p105)


@pytest.fixture(scope="session")
def code75():
    return build_code(CodeParams(7, 5, 7, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
