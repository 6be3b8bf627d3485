import io
import random

import pytest

from cyclefree import cli
from cyclefree.birkhoff import PermSet, sign


def random_even_set(n, size, rng):
    """A random set of even permutations of [n] with at most ``size`` members."""
    perms = set()
    base = list(range(1, n + 1))
    for _ in range(size):
        p = base[:]
        rng.shuffle(p)
        if sign(tuple(p)) < 0:
            p[0], p[1] = p[1], p[0]
        perms.add(tuple(p))
    return PermSet(n, tuple(perms))


def run_cli(argv, stdin_text=None, monkeypatch=None):
    """Run the CLI in-process; returns (exit code, stdout text)."""
    out = io.StringIO()
    if stdin_text is not None:
        assert monkeypatch is not None
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = cli.main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def cli_run(monkeypatch):
    def _run(argv, stdin_text=None):
        return run_cli(argv, stdin_text, monkeypatch)
    return _run


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
