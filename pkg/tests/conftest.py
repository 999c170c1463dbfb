import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_uhp(rng, n, spread=2.0):
    """Points x + iy with x ~ N(0, spread) and log y ~ N(0, 1)."""
    return rng.normal(0, spread, n) + 1j * np.exp(rng.normal(0, 1, n))


def random_sl2(rng, n):
    """Batch of SL(2, R) matrices (a, b, c, d) with moderate entries."""
    from hausdorff_h2.sl2 import SL2Element, x_of_z, rotation_k

    g = x_of_z(random_uhp(rng, n, 1.0)) @ rotation_k(rng.uniform(0, 2 * np.pi, n))
    return SL2Element.of(g)


# one (name, passed, detail) entry per acceptance criterion, filled by test_acceptance
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
