import numpy as np
import pytest

from setcx.bitstrings import BitString, make_rng, random_bitstring


@pytest.fixture
def rng():
    return make_rng(20240611)


@pytest.fixture(scope="session")
def random_1000():
    # seed 12345 -> 206 bytes under the reference backend (frozen in test_compression)
    return random_bitstring(1000, 12345)


def bits(s: str) -> BitString:
    return BitString(s)


def random_pair_set(n, L, seed):
    r = make_rng(seed)
    return [random_bitstring(L, r) for _ in range(n)]


_ACCEPTANCE = []


@pytest.fixture
def record(request):
    """Log one acceptance line; the outcome is filled in after the test runs."""
    entry = {"id": request.node.name, "detail": ""}
    _ACCEPTANCE.append(entry)

    def note(detail):
        entry["detail"] = detail

    yield note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        for entry in _ACCEPTANCE:
            if entry["id"] == item.name:
                entry["passed"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for e in _ACCEPTANCE:
        status = "PASS" if e.get("passed") else "FAIL"
        terminalreporter.write_line(f"{status}  {e['id']}  {e['detail']}")
