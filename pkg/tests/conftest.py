from fractions import Fraction as F

import pytest

from menuforge.corpus import counterexample_game, examples_game, rps_game
from menuforge.menus import build_nr_menu, build_nsr_menu
from menuforge.meanbased import build_mb


@pytest.fixture(scope="session")
def ce():
    return counterexample_game()


@pytest.fixture(scope="session")
def rps():
    return rps_game()


@pytest.fixture(scope="session")
def ex():
    return examples_game()


@pytest.fixture(scope="session")
def ce_nr(ce):
    return build_nr_menu(ce)


@pytest.fixture(scope="session")
def ce_nsr(ce):
    return build_nsr_menu(ce)


@pytest.fixture(scope="session")
def ce_mb(ce):
    return build_mb(ce)


@pytest.fixture(scope="session")
def rps_nr(rps):
    return build_nr_menu(rps)


@pytest.fixture(scope="session")
def rps_nsr(rps):
    return build_nsr_menu(rps)


@pytest.fixture(scope="session")
def gamma_csp(ce):
    # 1/3 (A,N) + 1/3 (A,Y) + 1/3 (C,Y), flat index i*n + j
    phi = [F(0)] * 6
    phi[ce.index(0, 0)] = F(1, 3)
    phi[ce.index(1, 0)] = F(1, 3)
    phi[ce.index(1, 2)] = F(1, 3)
    return tuple(phi)


@pytest.fixture(scope="session")
def tau_profile():
    # 1/6 (N,C) + 1/3 (Y,C) + 1/2 (N,B)
    return (F(0), F(1, 2), F(1, 6), F(0), F(0), F(1, 3))


# acceptance criteria: number -> list of (part, passed, detail)
ACCEPTANCE: dict = {}


def record(criterion: int, part: str, passed: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((part, passed, detail))
    print(f"[criterion {criterion}{part}] {'PASS' if passed else 'FAIL'}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[c]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"{name + ': ' if name else ''}{'ok' if p else 'FAILED'} ({d})" for name, p, d in parts)
        tr.write_line(f"criterion {c}: {'PASS' if ok else 'FAIL'} - {detail}")
