import pytest

_criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call" or not item.nodeid.startswith("tests/test_acceptance.py"):
        return
    props = dict(rep.user_properties)
    name = props.get("criterion", item.name)
    if rep.passed:
        _criteria.append(f"PASS {name}: {props.get('detail', '')}")
    else:
        msg = str(call.excinfo.value).splitlines()[0] if call.excinfo else "failed"
        _criteria.append(f"FAIL {name}: {msg}")


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for line in _criteria:
            terminalreporter.write_line(line)
