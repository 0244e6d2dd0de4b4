"""Periodic computational box, real fields and discrete transforms.

The box is [-L, L)^N with n uniform points per dimension (n a power of
two), so dx = 2L/n.  Mode j carries the signed integer frequency
k in {-n/2, ..., n/2 - 1} and the physical frequency kappa = pi*k/L.
Everything downstream (nonlocal operators, solvers, verification
harness) is built on the three types defined here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-half_width, half_width)^dim."""

    dim: int
    half_width: float
    points_per_dim: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.points_per_dim < 8 or not _is_power_of_two(self.points_per_dim):
            raise ValueError(
                f"points_per_dim must be a power of two >= 8, got {self.points_per_dim}"
            )

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.points_per_dim

    @property
    def shape(self) -> tuple:
        return (self.points_per_dim,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_dim**self.dim

    @property
    def cell_volume(self) -> float:
        return self.dx**self.dim

    def axis_coords(self) -> np.ndarray:
        """Grid coordinates along one axis: -L, -L+dx, ..., L-dx."""
        n = self.points_per_dim
        return -self.half_width + self.dx * np.arange(n)

    def coords(self) -> tuple:
        """Meshgrid coordinate arrays, one per dimension (ij indexing)."""
        x = self.axis_coords()
        if self.dim == 1:
            return (x,)
        return tuple(np.meshgrid(x, x, indexing="ij"))

    def radius(self) -> np.ndarray:
        """Euclidean distance of every grid point from the origin."""
        c = self.coords()
        return np.sqrt(sum(ci**2 for ci in c))

    def axis_frequencies(self) -> np.ndarray:
        """Physical frequencies kappa = pi*k/L in FFT order along one axis."""
        n = self.points_per_dim
        k = np.fft.fftfreq(n, d=1.0 / n)  # signed integers -n/2..n/2-1
        return np.pi * k / self.half_width

    def frequency_magnitude(self) -> np.ndarray:
        """|kappa| on the full FFT mode lattice."""
        ka = self.axis_frequencies()
        if self.dim == 1:
            return np.abs(ka)
        kx, ky = np.meshgrid(ka, ka, indexing="ij")
        return np.sqrt(kx**2 + ky**2)


@dataclass(frozen=True)
class Field:
    """Real samples of a function on a Grid; immutable after construction."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            if v.size == self.grid.size:
                v = v.reshape(self.grid.shape)
            else:
                raise ValueError(
                    f"values shape {v.shape} incompatible with grid shape {self.grid.shape}"
                )
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients of a Field, normalized so coeffs[0] is the mean."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != self.grid.shape:
            raise ValueError(
                f"coeffs shape {c.shape} incompatible with grid shape {self.grid.shape}"
            )
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


def field_from_function(grid: Grid, func) -> Field:
    """Sample a callable of the coordinate arrays into a Field."""
    return Field(grid, np.asarray(func(*grid.coords()), dtype=float))


def constant_field(grid: Grid, value: float) -> Field:
    return Field(grid, np.full(grid.shape, float(value)))


def forward_transform(f: Field) -> SpectralField:
    """DFT with 1/n^N normalization: zero mode equals the field mean."""
    return SpectralField(f.grid, np.fft.fftn(f.values) / f.grid.size)


def inverse_transform(sf: SpectralField) -> Field:
    """Inverse of forward_transform; imaginary round-off is discarded."""
    return Field(sf.grid, np.fft.ifftn(sf.coeffs * sf.grid.size).real)


def integrate(f: Field) -> float:
    """Box integral: sum of values times dx^N."""
    return float(np.sum(f.values) * f.grid.cell_volume)


def norm(f: Field, p: float) -> float:
    """Discrete L^p norm with dx^N weighting; p = inf gives max |values|."""
    if p == np.inf:
        return float(np.max(np.abs(f.values)))
    if p < 1:
        raise ValueError(f"norm requires p >= 1 or p = inf, got {p}")
    return float((np.sum(np.abs(f.values) ** p) * f.grid.cell_volume) ** (1.0 / p))


def boundary_mass_fraction(f: Field) -> float:
    """Fraction of the field's |mass| sitting at |x| > L/2 (contamination gauge)."""
    total = np.sum(np.abs(f.values))
    if total == 0.0:
        return 0.0
    outside = f.grid.radius() > 0.5 * f.grid.half_width
    return float(np.sum(np.abs(f.values)[outside]) / total)
