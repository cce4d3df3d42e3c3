import os

import pytest

from kasteleyn import _backend

_LINES = []


@pytest.fixture
def report():
    """Record one pass/fail line for an acceptance criterion."""
    def record(number, passed, detail):
        line = f"acceptance {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        _LINES.append(line)
    return record


@pytest.fixture(params=["python", "cython"])
def backend(request, monkeypatch):
    """Run a test once on each backend; the compiled one is skipped if absent."""
    from kasteleyn import _pykernels
    if request.param == "python":
        mod = _pykernels
    else:
        try:
            from kasteleyn import _ckernels as mod
        except ImportError:
            pytest.skip("compiled kernels not built")
    monkeypatch.setattr(_backend, "power_sums", mod.power_sums)
    monkeypatch.setattr(_backend, "transfer_step", mod.transfer_step)
    monkeypatch.setattr(_backend, "NAME", request.param)
    return request.param


def pytest_report_header(config):
    forced = os.environ.get("KASTELEYN_PURE_PYTHON", "")
    return f"kasteleyn backend: {_backend.NAME}" + (f" (KASTELEYN_PURE_PYTHON={forced})" if forced else "")


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
