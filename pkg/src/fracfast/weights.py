"""Admissible decay weights and weighted integrals.

The weight family is

    theta(x) = (1 + (|x|^2 - 1)_+^4)^(-a/8),    N < a < N + sigma/m,

radially nonincreasing, identically 1 on the unit ball and ~ |x|^(-a)
at infinity.  The open interval for the exponent a is exactly what keeps
the quotient integral

    int ( |(-Delta)^{sigma/2} theta| / theta^m )^(1/(1-m))

finite, which is the engine behind every weighted-L1 estimate checked by
the harness.  Rescaling acts by theta_R(x) = theta(x/R).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, Grid
from .operators import FracParams, frac_laplacian_quadrature


@dataclass(frozen=True)
class Weight:
    """Element of the weight family, with rescale parameter R >= 1."""

    a: float
    sigma: float
    m: float
    R: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.m < 1.0):
            raise ValueError(f"m must lie in (0, 1), got {self.m}")
        if not (0.0 < self.sigma < 2.0):
            raise ValueError(f"sigma must lie in (0, 2), got {self.sigma}")
        if self.R < 1.0:
            raise ValueError(f"R must be >= 1, got {self.R}")

    def check_exponent(self, dim: int):
        lo, hi = float(dim), dim + self.sigma / self.m
        if not (lo < self.a < hi):
            raise ValueError(
                f"weight exponent a={self.a} outside the admissible open "
                f"interval ({lo}, {hi}) for N={dim}, sigma={self.sigma}, m={self.m}"
            )

    def rescaled(self, R: float) -> "Weight":
        return Weight(self.a, self.sigma, self.m, R)


def weight_eval(w: Weight, x) -> np.ndarray:
    """Pointwise theta_R at Euclidean distance(s) |x| from the origin."""
    r = np.asarray(x, dtype=float) / w.R
    bump = np.maximum(r**2 - 1.0, 0.0) ** 4
    return (1.0 + bump) ** (-w.a / 8.0)


def weight_field(w: Weight, grid: Grid) -> Field:
    """theta_R sampled on the grid."""
    w.check_exponent(grid.dim)
    return Field(grid, weight_eval(w, grid.radius()))


def weighted_l1(f: Field, w: Weight) -> float:
    """Discrete integral of f * theta_R over the box."""
    theta = weight_eval(w, f.grid.radius())
    return float(np.sum(f.values * theta) * f.grid.cell_volume)


def weight_quotient_integral(w: Weight, grid: Grid) -> float:
    """Truncated quotient integral evaluated with the quadrature operator.

    Finite for a strictly inside the admissible interval; grows toward the
    right endpoint.  Callers establish convergence by sweeping the box size.
    """
    w.check_exponent(grid.dim)
    theta = weight_field(w, grid)
    p = FracParams(w.sigma, grid.dim)
    ltheta = frac_laplacian_quadrature(theta, p)
    quotient = np.abs(ltheta.values) / theta.values**w.m
    integrand = quotient ** (1.0 / (1.0 - w.m))
    return float(np.sum(integrand) * grid.cell_volume)


def weight_pointwise_bound_constant(w: Weight, grid: Grid) -> float:
    """Measured constant in |L theta(x)| <= C / (1 + |x|^{N+sigma}).

    The bound itself is a property of the family; only the constant is
    observable, so it is recorded rather than asserted.
    """
    w.check_exponent(grid.dim)
    theta = weight_field(w, grid)
    p = FracParams(w.sigma, grid.dim)
    ltheta = frac_laplacian_quadrature(theta, p)
    envelope = 1.0 / (1.0 + grid.radius() ** (grid.dim + w.sigma))
    return float(np.max(np.abs(ltheta.values) / envelope))
