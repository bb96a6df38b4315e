"""Reference Cauchy data used by the configs, scripts and tests."""
from __future__ import annotations

from .spectral_data import CauchyData

_BASE = {1: 0.5, -1: 0.3 + 0.3j, 2: 0.5, -2: -0.03 + 0.03j, 3: 0.3, -3: 0.2 + 0.3j,
         4: 0.3, -4: -0.3 + 0.03j, 5: 0.3, -5: 0.2 + 0.3j, 6: 0.3, -6: -0.3 + 0.03j}


def one_mode(T0: float = 40.0) -> CauchyData:
    """L = 6: a single unstable mode."""
    return CauchyData(6.0, 1e-4, {1: 0.5, -1: (0.3 - 0.4j) / 2}, T0=T0, p=0.5)


def three_modes(T0: float = 60.0) -> CauchyData:
    """L = 10: three unstable modes, weak third mode."""
    c = {1: 0.5, -1: 0.3 + 0.3j, 2: 0.5, -2: -0.03 + 0.03j, 3: 0.03, -3: 0.02 + 0.03j}
    return CauchyData(10.0, 1e-6, c, T0=T0, p=0.5)


def four_modes(T0: float = 30.0) -> CauchyData:
    """L = 14: four unstable modes."""
    return CauchyData(14.0, 1e-6, {j: c for j, c in _BASE.items() if abs(j) <= 4}, T0=T0, p=0.5)


def six_modes(T0: float = 30.0) -> CauchyData:
    """L = 20: six unstable modes."""
    return CauchyData(20.0, 1e-6, dict(_BASE), T0=T0, p=0.5)
