"""Default frequency grid: an "almost all omega" surrogate on (0, pi).

Points are clustered logarithmically near 0 and pi with a uniform fill, plus
a small deterministic jitter so that grids dodge poles sitting at round
frequencies.  Doubling the density must not change structural verdicts.
"""

from __future__ import annotations

import numpy as np

DEFAULT_GRID_SIZE = 256


def make_grid(n: int = DEFAULT_GRID_SIZE, seed: int = 0) -> np.ndarray:
    """Frequencies in the open interval (0, pi), sorted and deduplicated."""
    if n < 4:
        raise ValueError("grid needs at least 4 points")
    n_low = n // 4
    n_high = n // 4
    n_mid = n - n_low - n_high
    low = np.pi * np.logspace(-5, -0.8, n_low)
    high = np.pi * (1.0 - np.logspace(-5, -0.8, n_high))
    mid = np.linspace(0.05 * np.pi, 0.95 * np.pi, n_mid)
    grid = np.concatenate([low, mid, high])
    rng = np.random.default_rng(seed)
    step = np.pi / (4 * n)
    grid = grid + rng.uniform(-step, step, size=grid.shape)
    grid = np.clip(grid, 1e-7, np.pi - 1e-7)
    return np.unique(grid)


def zvals(omega: np.ndarray) -> np.ndarray:
    """Delay-variable points ``z = e^{-i w}`` for a frequency grid."""
    return np.exp(-1j * np.asarray(omega))
