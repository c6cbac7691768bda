"""Cell integrals over the uniform 2n x 2n cell grid on the square.

The cell grid tiles [-1, 1] per axis with the 2n intervals [k/n, (k+1)/n],
k = -n .. n-1.  Smooth integrands go through tensor Gauss-Legendre rules;
piecewise-constant image fields go through exact overlap sums.  Integrands
with declared vertical break lines get their x-intervals split at the break
points first, since a Gauss rule loses its order across a jump.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import NonFiniteIntegrandError

DEFAULT_POINTS_PER_AXIS = 4


@dataclass(frozen=True)
class CellIntegral:
    """One cell integral: indices k, m in -n..n-1 and the integral value."""

    k: int
    m: int
    value: complex


def cell_edges(n: int) -> np.ndarray:
    """The 2n+1 cell edges k/n for k = -n..n."""
    return np.arange(-n, n + 1) / n


def _axis_rule(n: int, points: int, breaks=()):
    """Per-axis quadrature abscissae/weights for all 2n cells.

    Returns (u, w, bounds) where u, w are flat arrays over every cell's
    points and bounds[c]:bounds[c+1] slices out cell c.  Cells containing a
    declared break point are split there, so point counts vary per cell.
    """
    gq, gw = leggauss(points)
    edges = cell_edges(n)
    us, ws, bounds = [], [], [0]
    for c in range(2 * n):
        a, b = edges[c], edges[c + 1]
        cuts = [a] + [br for br in sorted(breaks) if a < br < b] + [b]
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            half = (hi - lo) / 2.0
            us.append(lo + (gq + 1.0) * half)
            ws.append(gw * half)
        bounds.append(bounds[-1] + points * (len(cuts) - 1))
    return np.concatenate(us), np.concatenate(ws), np.asarray(bounds)


def cell_integral_matrix(value, n: int, points_per_axis: int = DEFAULT_POINTS_PER_AXIS,
                         break_lines=()) -> np.ndarray:
    """Integrals of f over every cell, as a (2n, 2n) complex matrix.

    Parameters
    ----------
    value : callable
        Vectorized integrand value(x, y) -> complex ndarray.
    n : int
        Cell grid parameter; cells have side 1/n.
    points_per_axis : int
        Gauss-Legendre points per axis per (sub)interval.
    break_lines : iterable of float
        Vertical lines x = c where the integrand jumps; x-intervals are
        subdivided there.
    """
    ux, wx, bx = _axis_rule(n, points_per_axis, break_lines)
    uy, wy, by = _axis_rule(n, points_per_axis)
    F = value(ux[:, None], uy[None, :])
    if not np.all(np.isfinite(F)):
        raise NonFiniteIntegrandError("integrand returned a non-finite value")
    G = (F * wx[:, None]) * wy[None, :]
    # reduce quad points to cells along each axis in turn
    G = np.add.reduceat(G, bx[:-1], axis=0)
    G = np.add.reduceat(G, by[:-1], axis=1)
    return G


def integrate_cell(value, k: int, m: int, n: int,
                   points_per_axis: int = DEFAULT_POINTS_PER_AXIS,
                   break_lines=()) -> complex:
    """Tensor Gauss-Legendre integral of f over the single cell (k, m).

    Exact for per-axis polynomials of degree <= 2*points_per_axis - 1.
    """
    if not (-n <= k <= n - 1 and -n <= m <= n - 1):
        raise ValueError(f"cell index out of range: ({k}, {m}) for n={n}")
    gq, gw = leggauss(points_per_axis)
    a, b = k / n, (k + 1) / n
    c, d = m / n, (m + 1) / n
    cuts = [a] + [br for br in sorted(break_lines) if a < br < b] + [b]
    total = 0.0 + 0.0j
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        half = (hi - lo) / 2.0
        ux = lo + (gq + 1.0) * half
        uy = c + (gq + 1.0) * (d - c) / 2.0
        F = value(ux[:, None], uy[None, :])
        if not np.all(np.isfinite(F)):
            raise NonFiniteIntegrandError(f"non-finite integrand in cell ({k}, {m})")
        total += np.einsum("i,ij,j->", gw * half, F, gw * (d - c) / 2.0)
    return complex(total)


def overlap_lengths(left_edges: np.ndarray, right_edges: np.ndarray) -> np.ndarray:
    """Pairwise interval-overlap lengths between two 1-D edge partitions.

    Entry (i, j) is the length of [left_i, left_{i+1}] intersected with
    [right_j, right_{j+1}]; used for exact step-field integration.
    """
    lo = np.maximum(left_edges[:-1, None], right_edges[None, :-1])
    hi = np.minimum(left_edges[1:, None], right_edges[None, 1:])
    return np.maximum(hi - lo, 0.0)


def step_cell_matrix(values: np.ndarray, x_edges: np.ndarray, y_edges: np.ndarray,
                     n: int) -> np.ndarray:
    """Exact integrals of a piecewise-constant field over every cell.

    `values` is the (u, v) matrix of constants and x_edges/y_edges are the
    u+1 / v+1 support edges in square coordinates.  The result is the
    (2n, 2n) matrix of cell integrals, computed as overlap-area sums; no
    quadrature error is involved.
    """
    ce = cell_edges(n)
    ox = overlap_lengths(ce, x_edges)
    oy = overlap_lengths(ce, y_edges)
    return ox @ values @ oy.T


def integrate_cell_step(field, k: int, m: int, n: int) -> float:
    """Exact integral of a step field over the single cell (k, m).

    `field` must expose `values`, `x_edges`, `y_edges` as produced by the
    imaging module's embedding.
    """
    if not (-n <= k <= n - 1 and -n <= m <= n - 1):
        raise ValueError(f"cell index out of range: ({k}, {m}) for n={n}")
    ce = cell_edges(n)
    ox = overlap_lengths(ce[k + n:k + n + 2], field.x_edges)[0]
    oy = overlap_lengths(ce[m + n:m + n + 2], field.y_edges)[0]
    return float(ox @ field.values @ oy)
