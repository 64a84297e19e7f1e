"""Uniform periodic cubic grid centered on the origin."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Grid3"]


@dataclass(frozen=True)
class Grid3:
    """n^3 periodic box with spacing dx, centered so x_i = (i - n//2) dx.

    The box must stay large enough that compactly supported data never reach
    the boundary: half_width > r0 + (t_end - t0) + margin, checked by
    supports_evolution and enforced at run time by the support-ball abort.
    """

    n: int
    dx: float
    periodic: bool = True

    def __post_init__(self):
        if self.n < 4:
            raise ValueError(f"grid needs n >= 4, got {self.n}")
        if self.dx <= 0:
            raise ValueError(f"grid spacing must be positive, got {self.dx}")
        if not self.periodic:
            raise ValueError("only periodic boxes are supported")

    @property
    def half_width(self) -> float:
        return 0.5 * self.n * self.dx

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n, self.n, self.n)

    @property
    def cell_volume(self) -> float:
        return self.dx**3

    def axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    def coords(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ax = self.axis()
        return np.meshgrid(ax, ax, ax, indexing="ij")

    def radius(self) -> np.ndarray:
        x, y, z = self.coords()
        return np.sqrt(x * x + y * y + z * z)

    def supports_evolution(self, r0: float, t0: float, t_end: float, margin_cells: int = 4) -> bool:
        return self.half_width > r0 + (t_end - t0) + margin_cells * self.dx

    @classmethod
    def from_half_width(cls, n: int, half_width: float) -> "Grid3":
        return cls(n=n, dx=2.0 * half_width / n)
