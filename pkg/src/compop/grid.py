"""Sampling grids shared by probes, seminorms and spectral validation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``N`` points on ``[-L, L]``.

    ``refinement_levels`` local zoom passes (8x density each) are applied around
    detected maxima. ``tail_max``, when set, adds ``tail_points`` logarithmically
    spaced samples on each side between ``L`` and ``tail_max``.
    """

    L: float = 30.0
    N: int = 4096
    refinement_levels: int = 3
    tail_eps: float = 1e-14
    tail_max: Optional[float] = None
    tail_points: int = 512

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("grid half-width must be positive")
        if self.N < 64:
            raise ValueError("grid needs at least 64 points")
        if self.refinement_levels < 0:
            raise ValueError("refinement levels must be non-negative")
        if self.tail_max is not None and self.tail_max <= self.L:
            raise ValueError("tail_max must exceed L")

    @property
    def spacing(self) -> float:
        return 2 * self.L / (self.N - 1)

    def points(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, self.N)

    def tails(self) -> np.ndarray:
        """Log-spaced tail samples, negative side first; empty without ``tail_max``."""
        if self.tail_max is None:
            return np.empty(0)
        right = np.geomspace(self.L, self.tail_max, self.tail_points + 1)[1:]
        return np.concatenate([-right[::-1], right])

    def probe_points(self) -> np.ndarray:
        """Base grid and tails merged, sorted ascending."""
        return np.sort(np.concatenate([self.points(), self.tails()]))

    def with_size(self, L=None, N=None) -> "GridSpec":
        return GridSpec(
            L=self.L if L is None else L,
            N=self.N if N is None else N,
            refinement_levels=self.refinement_levels,
            tail_eps=self.tail_eps,
            tail_max=self.tail_max,
            tail_points=self.tail_points,
        )


DEFAULT_GRID = GridSpec()
PROBE_GRID = GridSpec(L=100.0, N=8192, tail_max=1e6)


def parse_grid(text: str) -> GridSpec:
    """``"L:N"`` -> GridSpec with default refinement and tails."""
    try:
        L, N = text.split(":")
        return GridSpec(L=float(L), N=int(N))
    except ValueError as exc:
        raise ValueError(f"grid must look like L:N, got {text!r}") from exc
