"""The three rational kernel-weighted approximation operator families.

All three share one weight system: nonnegative kernel powers
lambda_k * |K_n(x, t_k)|^s per axis, multiplied across axes and normalized
to sum to 1.  They differ in what gets averaged:

* generalized: point samples f(z_{k,m}) at the Chebyshev node grid;
* kantorovich: n^2 times cell integrals of f over a uniform 2n x 2n cell
  grid, with kernel anchors at the cell midpoints;
* hermite: degree-r Taylor polynomials of f centered at the nodes.

Because every family is a ratio of weighted sums, any fixed positive factor
multiplying the kernel drops out; tests assert that invariance.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from math import factorial
from typing import Callable, Optional, Sequence

import numpy as np

from . import quadrature
from .chebyshev import ChebyshevBasis, kernel_matrix, kernel_row, make_basis
from .errors import (DegenerateDenominatorError, DomainError,
                     MissingDerivativesError)


class Family(Enum):
    GENERALIZED = "generalized"
    KANTOROVICH = "kantorovich"
    HERMITE = "hermite"


@dataclass(frozen=True)
class OperatorConfig:
    """Family selector plus parameters.

    `s` is the kernel exponent, `r` the Taylor degree (hermite only), and
    `cell_subdivision` the Gauss-Legendre points per cell axis (kantorovich
    only).  Any s >= 0 is accepted; a warning is emitted outside the ranges
    where the convergence theory applies (1 < s <= 2 for generalized and
    hermite, s >= 2 for kantorovich).
    """

    family: Family
    n: int
    s: float = 2.0
    r: int = 0
    cell_subdivision: int = quadrature.DEFAULT_POINTS_PER_AXIS

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        if self.s < 0:
            raise DomainError(f"s must be nonnegative, got {self.s}")
        if self.family is Family.HERMITE and self.r < 1:
            raise DomainError("hermite family requires r >= 1")
        if self.family in (Family.GENERALIZED, Family.HERMITE):
            if not (1.0 < self.s <= 2.0):
                warnings.warn(f"s={self.s} is outside (1, 2], where uniform "
                              "convergence is established", stacklevel=2)
        elif self.s < 2.0:
            warnings.warn(f"s={self.s} is below 2, where the cell-averaged "
                          "family's convergence is established", stacklevel=2)


@dataclass(frozen=True)
class ComplexField:
    """A complex-valued function of a point of the square.

    `value` maps real arrays (x, y) to complex values, vectorized.
    `derivatives`, when present, maps (j, z) to the complex j-th derivative
    at z (z may be an ndarray).  `break_lines` lists vertical lines x = c
    across which the value jumps; cell integrals are split there.
    """

    value: Callable
    derivatives: Optional[Callable] = None
    integrable_only: bool = False
    break_lines: Sequence[float] = field(default=())


@dataclass(frozen=True)
class NodeGrid2D:
    """Chebyshev node grid with product weights cotes_k * cotes_m."""

    basis_x: ChebyshevBasis
    basis_y: ChebyshevBasis
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.basis_x.n


def make_node_grid(n: int) -> NodeGrid2D:
    basis = make_basis(n)
    return NodeGrid2D(basis_x=basis, basis_y=basis,
                      weights=np.outer(basis.cotes, basis.cotes))


@dataclass(frozen=True)
class KantorovichGrid:
    """Uniform cell grid with midpoint kernel anchors.

    Cells are [k/n, (k+1)/n] per axis for k = -n..n-1; the anchor of cell k
    is its midpoint (2k+1)/(2n) and the anchor weight is the reciprocal of
    the kernel diagonal there.
    """

    basis: ChebyshevBasis
    anchors: np.ndarray
    anchor_weights: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.n


def make_kantorovich_grid(n: int) -> KantorovichGrid:
    basis = make_basis(n)
    k = np.arange(-n, n)
    anchors = (2 * k + 1) / (2 * n)
    diag = np.array([kernel_row(basis, float(t), np.asarray([t]))[0] for t in anchors])
    return KantorovichGrid(basis=basis, anchors=anchors, anchor_weights=1.0 / diag)


def _axis_weights_nodes(basis: ChebyshevBasis, pts: np.ndarray, s: float) -> np.ndarray:
    """Per-axis node weights cotes_k |K_n(x, x_k)|^s for each x in pts."""
    K = kernel_matrix(basis, pts, basis.nodes)
    return basis.cotes[None, :] * np.abs(K) ** s


def _axis_weights_anchors(grid: KantorovichGrid, pts: np.ndarray, s: float) -> np.ndarray:
    K = kernel_matrix(grid.basis, pts, grid.anchors)
    return grid.anchor_weights[None, :] * np.abs(K) ** s


def _check_point(z: complex):
    if abs(z.real) > 1 + 1e-12 or abs(z.imag) > 1 + 1e-12:
        raise DomainError(f"evaluation point outside the square: {z}")


def _ratio(num: np.ndarray, den: np.ndarray, xs, ys):
    if np.any(den == 0.0) or not np.all(np.isfinite(den)):
        i, j = np.argwhere((den == 0.0) | ~np.isfinite(den))[0]
        raise DegenerateDenominatorError(complex(xs[i], ys[j]))
    return num / den


def evaluate_generalized_grid(grid: NodeGrid2D, s: float, f: ComplexField,
                              xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Generalized-family values on the tensor grid xs x ys."""
    nodes = grid.basis_x.nodes
    F = np.asarray(f.value(nodes[:, None], nodes[None, :]), dtype=complex)
    WX = _axis_weights_nodes(grid.basis_x, np.asarray(xs, dtype=float), s)
    WY = _axis_weights_nodes(grid.basis_y, np.asarray(ys, dtype=float), s)
    num = WX @ F @ WY.T
    den = np.outer(WX.sum(axis=1), WY.sum(axis=1))
    return _ratio(num, den, xs, ys)


def evaluate_hermite_grid(grid: NodeGrid2D, s: float, r: int, derivatives: Callable,
                          xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Hermite-family values on the tensor grid xs x ys.

    The Taylor polynomial at each node is evaluated by Horner recursion on
    (z - z_{k,m}); powers never go through a complex log.
    """
    nodes = grid.basis_x.nodes
    n = grid.n
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    Znod = nodes[:, None] + 1j * nodes[None, :]
    coeff = [np.asarray(derivatives(j, Znod), dtype=complex) / factorial(j)
             for j in range(r + 1)]
    WX = _axis_weights_nodes(grid.basis_x, xs, s)
    WY = _axis_weights_nodes(grid.basis_y, ys, s)
    sx = WX.sum(axis=1)
    sy = WY.sum(axis=1)
    out = np.empty((xs.size, ys.size), dtype=complex)
    for i, x in enumerate(xs):
        dz = (x - nodes)[None, :, None] + 1j * (ys[:, None, None] - nodes[None, None, :])
        P = np.broadcast_to(coeff[r][None], dz.shape).copy()
        for j in range(r - 1, -1, -1):
            P = coeff[j][None] + dz * P
        num = np.einsum("k,ykm,ym->y", WX[i], P, WY)
        out[i] = _ratio(num, sx[i] * sy, [x], ys)
    return out


def evaluate_kantorovich_grid(grid: KantorovichGrid, s: float, cell_ints: np.ndarray,
                              xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Kantorovich-family values on xs x ys from precomputed cell integrals."""
    n = grid.n
    WX = _axis_weights_anchors(grid, np.asarray(xs, dtype=float), s)
    WY = _axis_weights_anchors(grid, np.asarray(ys, dtype=float), s)
    num = WX @ cell_ints @ WY.T
    den = np.outer(WX.sum(axis=1), WY.sum(axis=1))
    return n * n * _ratio(num, den, xs, ys)


def kantorovich_cell_integrals(f: ComplexField, n: int,
                               points_per_axis: int = quadrature.DEFAULT_POINTS_PER_AXIS
                               ) -> np.ndarray:
    """Cell-integral matrix for a field, honoring its declared break lines."""
    return quadrature.cell_integral_matrix(f.value, n, points_per_axis,
                                           break_lines=f.break_lines)


def nevai_generalized(grid: NodeGrid2D, cfg: OperatorConfig, f: ComplexField,
                      z: complex) -> complex:
    """Kernel-weighted average of node samples at a single point z."""
    _check_point(z)
    out = evaluate_generalized_grid(grid, cfg.s, f,
                                    np.asarray([z.real]), np.asarray([z.imag]))
    return complex(out[0, 0])


def nevai_kantorovich(grid: KantorovichGrid, cfg: OperatorConfig, f: ComplexField,
                      z: complex, cell_ints: Optional[np.ndarray] = None) -> complex:
    """Cell-averaged operator value at a single point z.

    Pass `cell_ints` to reuse a precomputed cell-integral matrix; otherwise
    one tensor Gauss-Legendre pass over the 2n x 2n cells is done here.
    """
    _check_point(z)
    if cell_ints is None:
        cell_ints = kantorovich_cell_integrals(f, grid.n, cfg.cell_subdivision)
    out = evaluate_kantorovich_grid(grid, cfg.s, cell_ints,
                                    np.asarray([z.real]), np.asarray([z.imag]))
    return complex(out[0, 0])


def nevai_hermite(grid: NodeGrid2D, cfg: OperatorConfig, f: ComplexField,
                  z: complex) -> complex:
    """Kernel-weighted average of degree-r Taylor polynomials at z."""
    _check_point(z)
    if f.derivatives is None:
        raise MissingDerivativesError("hermite family needs a derivative supplier")
    out = evaluate_hermite_grid(grid, cfg.s, cfg.r, f.derivatives,
                                np.asarray([z.real]), np.asarray([z.imag]))
    return complex(out[0, 0])


def denominator(grid: NodeGrid2D, s: float, z: complex) -> float:
    """The raw weight mass at z, exposed for diagnostics.

    This is the unnormalized double sum of cotes weights times the kernel
    modulus raised to s; unlike the operators themselves its scale depends
    on the kernel normalization, so compare it only against values using
    the same quotient-formula convention.
    """
    _check_point(z)
    wx = _axis_weights_nodes(grid.basis_x, np.asarray([z.real]), s)[0]
    wy = _axis_weights_nodes(grid.basis_y, np.asarray([z.imag]), s)[0]
    return float(wx.sum() * wy.sum())
