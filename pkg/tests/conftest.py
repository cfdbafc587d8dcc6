import functools
import math

import pytest

from prolate.eigensolve import inner_spectrum, oracle_matrix_spectrum, outer_spectrum, ProlateProblem

SQRT2 = math.sqrt(2.0)

# acceptance criterion -> (passed, detail); printed in the terminal summary
ACCEPTANCE_LINES = {}


@functools.lru_cache(maxsize=None)
def cached_outer(lam, parity, count):
    return tuple(outer_spectrum(lam, parity, count))


@functools.lru_cache(maxsize=None)
def cached_inner(lam, parity, n_max):
    return tuple(inner_spectrum(lam, parity, n_max))


@functools.lru_cache(maxsize=None)
def cached_oracle(lam, parity, region, count, grid_size=1000):
    return tuple(oracle_matrix_spectrum(ProlateProblem(lam, parity, region), grid_size, count))


@pytest.fixture(scope="session")
def outer():
    return cached_outer


@pytest.fixture(scope="session")
def inner():
    return cached_inner


@pytest.fixture(scope="session")
def oracle():
    return cached_oracle


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        ok, detail = ACCEPTANCE_LINES[key]
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
