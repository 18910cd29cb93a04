"""Shared fixtures: the natural parameter point and tolerance helpers."""

import pytest

from morseband import PhysParams


@pytest.fixture(scope="session")
def p() -> PhysParams:
    """Natural parameter point: hbar = c = mu = 1, e = -1, B0 = 1, a0 = 2*pi.

    Frozen dataclass, safe to share across the whole run. beta = 2 here,
    so the weight mode sits at x_c = ln 2.
    """
    return PhysParams.natural()


def rel(measured: float, target: float) -> float:
    """Relative deviation with a safe floor for exact-zero targets."""
    scale = max(abs(target), 1e-300)
    return abs(measured - target) / scale
