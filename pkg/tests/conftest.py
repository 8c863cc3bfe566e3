from pathlib import Path

import numpy as np
import pytest

from tribounds import SymTriInterval, eigenvalue_bounds

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

EXAMPLE_A = [(2975, 3025), (4965, 5035), (6955, 7045), (8945, 9055)]
EXAMPLE_B = [(-2015, -1985), (-3020, -2980), (-4025, -3975)]


def example_matrix() -> SymTriInterval:
    return SymTriInterval(EXAMPLE_A, EXAMPLE_B)


def separated_instance(rng, n, spacing=10.0, rad=0.3):
    """Diagonally dominant, positive couplings, well separated diagonal.

    Gershgorin discs of rows two apart never meet, so the fast path
    certifies sign invariancy.
    """
    a_mid = spacing * np.arange(n) + rng.uniform(-1, 1, n)
    a_rad = rng.uniform(0, rad, n)
    b_mid = rng.uniform(0.5, 2.0, n - 1)
    b_rad = rng.uniform(0, 0.4, n - 1)
    perm = rng.permutation(n) if rng.random() < 0.5 else np.arange(n)
    return SymTriInterval.from_center_radius(a_mid[perm], a_rad, b_mid, b_rad)


def general_instance(rng, n):
    """Arbitrary intervals: mixed-sign and straddling couplings allowed."""
    a_mid = rng.uniform(-5, 5, n)
    b_mid = rng.uniform(-3, 3, n - 1)
    return SymTriInterval.from_center_radius(
        a_mid, rng.uniform(0, 2, n), b_mid, rng.uniform(0, 2, n - 1)
    )


@pytest.fixture
def example():
    return example_matrix()


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    # loads or compiles the numba kernels once, so timed tests see steady state
    eigenvalue_bounds(example_matrix())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}")
