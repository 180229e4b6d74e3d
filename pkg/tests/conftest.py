import functools

CRITERIA: dict = {}


def criterion(number: int, title: str):
    """Record a PASS/FAIL line for an acceptance test, keyed by its number."""

    def wrap(fn):
        @functools.wraps(fn)
        def test(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException:
                CRITERIA[number] = ("FAIL", title, "")
                raise
            CRITERIA[number] = ("PASS", title, detail or "")

        return test

    return wrap


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        verdict, title, detail = CRITERIA[number]
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"AC{number:<2} {verdict}  {title}{suffix}")
