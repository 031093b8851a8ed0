"""Periodic momentum/coordinate lattices in FFT ordering.

The momentum lattice spans [-pmax, pmax) per axis with spacing dp = 2 pmax / n;
the dual coordinate lattice spans [-L/2, L/2) with dx = pi / pmax (so
dx * dp = 2 pi / n and plane waves diagonalize the FFT with no index shifts).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Cubic n^3 lattice; axes are in FFT order (0, dp, ..., -pmax, ..., -dp)."""

    n: int
    pmax: float

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise ValueError(f"grid size must be even and >= 8, got {self.n}")
        if not self.pmax > 0.0:
            raise ValueError(f"pmax must be positive, got {self.pmax}")

    @property
    def dp(self) -> float:
        return 2.0 * self.pmax / self.n

    @property
    def dx(self) -> float:
        return np.pi / self.pmax

    @property
    def length(self) -> float:
        return self.n * self.dx

    @cached_property
    def p1d(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @cached_property
    def x1d(self) -> np.ndarray:
        return self.dx * self.n * np.fft.fftfreq(self.n)

    @cached_property
    def p(self) -> np.ndarray:
        """Momentum components, shape (n, n, n, 3)."""
        px, py, pz = np.meshgrid(self.p1d, self.p1d, self.p1d, indexing="ij")
        return np.stack([px, py, pz], axis=-1)

    @cached_property
    def x(self) -> np.ndarray:
        """Coordinate components, shape (n, n, n, 3)."""
        xx, yy, zz = np.meshgrid(self.x1d, self.x1d, self.x1d, indexing="ij")
        return np.stack([xx, yy, zz], axis=-1)

    def energies(self, mass: float) -> np.ndarray:
        """On-shell energies per node, shape (n, n, n)."""
        return np.sqrt(mass * mass + np.sum(self.p * self.p, axis=-1))
