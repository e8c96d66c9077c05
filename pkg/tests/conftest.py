import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from _registry import RESULTS


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, description, passed, detail in sorted(RESULTS):
        status = "PASS" if passed else "FAIL"
        line = f"[criterion {number:2d}] {status}  {description}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
