"""Uniform grids and grid-sampled functions.

A ``GridFunction`` is the numeric currency of all convolution work: a
function sampled on a uniform grid together with an interpretation tag
(``cdf``, ``density`` or ``raw``).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["GridSpec", "GridFunction"]

_CDF_SLACK = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """A uniform grid on ``[left, right]`` with step ``dx``.

    ``n_points`` snaps ``right`` outward so the step divides the span
    exactly.
    """

    left: float
    right: float
    dx: float

    def __post_init__(self):
        if not (self.dx > 0.0):
            raise ValueError("dx must be positive")
        if not (self.right > self.left):
            raise ValueError("empty grid: right <= left")

    @property
    def n_points(self) -> int:
        return int(np.ceil((self.right - self.left) / self.dx - 1e-9)) + 1

    def points(self) -> np.ndarray:
        return self.left + self.dx * np.arange(self.n_points)


@dataclass
class GridFunction:
    """Values of a function on a uniform grid.

    kind:
        ``cdf``     nondecreasing, values in [0, 1] (within slack)
        ``density`` nonnegative (within slack)
        ``raw``     unconstrained
    """

    x0: float
    dx: float
    values: np.ndarray
    kind: str = "raw"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 2:
            raise ValueError("values must be a 1-d vector with >= 2 samples")
        if self.kind not in ("cdf", "density", "raw"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "cdf":
            if np.any(np.diff(self.values) < -_CDF_SLACK):
                raise ValueError("cdf values must be nondecreasing")
            if self.values.min() < -_CDF_SLACK or self.values.max() > 1.0 + _CDF_SLACK:
                raise ValueError("cdf values must lie in [0, 1]")
        elif self.kind == "density":
            if self.values.min() < -_CDF_SLACK:
                raise ValueError("density values must be nonnegative")

    @property
    def x1(self) -> float:
        return self.x0 + self.dx * (self.values.size - 1)

    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.values.size)

    def __call__(self, xq) -> np.ndarray:
        """Linear interpolation; constant extrapolation past the edges."""
        xq = np.asarray(xq, dtype=float)
        return np.interp(xq, self.x(), self.values)

    def derivative(self, kind: str = "raw") -> "GridFunction":
        """Centered finite-difference derivative on the same grid."""
        d = np.gradient(self.values, self.dx)
        return GridFunction(self.x0, self.dx, d, kind=kind)

    def integral(self) -> float:
        """Trapezoid integral over the whole grid."""
        return float(np.trapezoid(self.values, dx=self.dx))

    def max_jump(self) -> float:
        """Largest increment between adjacent samples."""
        return float(np.max(np.abs(np.diff(self.values))))

    def restrict(self, left: float, right: float) -> "GridFunction":
        """Slice to the sub-grid covering [left, right]."""
        i0 = max(0, int(np.floor((left - self.x0) / self.dx)))
        i1 = min(self.values.size - 1, int(np.ceil((right - self.x0) / self.dx)))
        if i1 - i0 < 1:
            raise ValueError("restriction window too small")
        return GridFunction(self.x0 + i0 * self.dx, self.dx,
                            self.values[i0:i1 + 1].copy(), kind=self.kind)
