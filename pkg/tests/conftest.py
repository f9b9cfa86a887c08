import numpy as np
import pytest

from qboot.hamming_core import CubeShape, as_mask


def words(shape, *texts):
    """Bitmap of the vertices given as digit strings."""
    return as_mask(list(texts), shape)


@pytest.fixture
def q3n2():
    return CubeShape(2, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ---------------------------------------------------------------- acceptance report

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    detail = getattr(item, "acceptance_detail", "")
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _ACCEPTANCE[number] = ("PASS" if rep.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, detail = _ACCEPTANCE[number]
        line = f"[{status}] criterion {number:2d}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
