import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    def log(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {str(number):>3}: {title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return log


def _order(line):
    label = line.split("criterion")[1].split(":")[0].strip()
    digits = "".join(ch for ch in label if ch.isdigit())
    return int(digits), label[len(digits):]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_order):
            terminalreporter.write_line(line)
