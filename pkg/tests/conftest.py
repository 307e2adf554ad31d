from hypothesis import settings

settings.register_profile("hocc", deadline=None, max_examples=100)
settings.load_profile("hocc")


def pytest_terminal_summary(terminalreporter):
    from report import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
