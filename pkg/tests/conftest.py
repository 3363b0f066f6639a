ACCEPTANCE = {}


def record(number, title, ok, detail=""):
    """Store one acceptance verdict for the terminal summary."""
    ACCEPTANCE[number] = (ok, title, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} {detail}".rstrip())
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {number:>2}. {title} {detail}".rstrip())
