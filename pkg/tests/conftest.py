"""Shared pytest plumbing: collects acceptance-criterion result lines."""

ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_sessionfinish(session, exitstatus):
    if ACCEPTANCE_LINES:
        tr = session.config.pluginmanager.get_plugin("terminalreporter")
        if tr is not None:
            tr.section("acceptance criteria")
            for line in ACCEPTANCE_LINES:
                tr.write_line(line)
