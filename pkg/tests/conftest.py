from __future__ import annotations

from functools import lru_cache

import pytest

from anyonchain.category import build_abelian_zn, build_fibonacci, build_su2k

PHI = (1 + 5**0.5) / 2


@lru_cache(maxsize=None)
def su2k(k: int):
    return build_su2k(k)


@pytest.fixture(scope="session")
def fib():
    return build_fibonacci()


@pytest.fixture(scope="session")
def z2():
    return build_abelian_zn(2)


ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str):
    """Store and print a one-line verdict for an acceptance criterion."""
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
