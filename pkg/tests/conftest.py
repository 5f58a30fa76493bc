import pytest

_LINES = []


@pytest.fixture
def criterion(request):
    """Record the sub-checks of one acceptance criterion.

    The test is marked failed after its body if any sub-check failed, so every
    measured value is reported rather than only the first failure.
    """
    checks = []
    request.node._criterion_checks = checks

    def check(label, ok, detail=""):
        checks.append((label, bool(ok), detail))

    return check


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    checks = getattr(item, "_criterion_checks", None)
    if call.when != "call" or checks is None:
        return
    rep = outcome.get_result()
    ok = rep.passed and bool(checks) and all(c[1] for c in checks)
    _LINES.append((item.name.removeprefix("test_"), ok, checks))
    if rep.passed and not ok:
        rep.outcome = "failed"
        rep.longrepr = "\n".join(f"{lab}: {det}" for lab, good, det in checks if not good)


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, ok, checks in _LINES:
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
        for label, good, detail in checks:
            tr.write_line(f"        {'ok ' if good else 'BAD'} {label}: {detail}")
