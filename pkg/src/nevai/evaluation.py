"""Grid evaluation of the operator families and the distance-sup rate study.

Evaluation grids use pixel-center spacing: N points per axis at
-1 + (2i - 1)/N for i = 1..N, so the grid keeps a margin of 1/(2N) from the
endpoints, where the kernel weights degenerate to a single node.

Work is decomposed into fixed-size row blocks before any threading
decision, so the set of floating-point operations is identical for every
worker count and outputs are bit-reproducible under `threads` changes.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import MissingDerivativesError
from .metrics import ErrorReport, RateEstimate, error_report, fit_rate
from .operators import (ComplexField, Family, OperatorConfig,
                        _axis_weights_anchors, evaluate_generalized_grid,
                        evaluate_hermite_grid, evaluate_kantorovich_grid,
                        kantorovich_cell_integrals, make_kantorovich_grid,
                        make_node_grid)
from .quadrature import cell_edges, step_cell_matrix

_BLOCK_ROWS = 16

# The distance-sup study avoids |coordinate| > 0.94.  Near the endpoints the
# kernel's oscillation lobes (width ~ pi/n in the arccos variable) become
# narrower than the uniform anchor spacing measured in that variable,
# 1/(n sqrt(1 - x^2)), once |x| > sqrt(1 - 1/pi^2) ~ 0.9479; past that line
# the anchors alias the lobes and the sup stops decaying at the interior
# rate regardless of n.
RATE_GRID_LIMIT = 0.94
RATE_GRID_POINTS = 41


def square_grid(points: int) -> np.ndarray:
    """Pixel-centered 1-D coordinates: points values with margin 1/(2*points)."""
    if points < 1:
        raise ValueError(f"grid needs at least one point, got {points}")
    h = 1.0 / points
    return np.linspace(-1.0 + h / 2.0, 1.0 - h / 2.0, points)


def resolve_threads(threads=None) -> int:
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


def map_rows(row_eval, n_rows: int, n_cols: int, threads=None,
             dtype=complex) -> np.ndarray:
    """Assemble a grid from row blocks, optionally across worker threads.

    `row_eval(lo, hi)` must return rows lo..hi-1 as an (hi-lo, n_cols)
    array.  Blocks are a fixed _BLOCK_ROWS wide regardless of `threads` and
    land in the output by index, so the result does not depend on the
    worker count or completion order.
    """
    out = np.empty((n_rows, n_cols), dtype=dtype)
    blocks = [(lo, min(lo + _BLOCK_ROWS, n_rows))
              for lo in range(0, n_rows, _BLOCK_ROWS)]
    workers = min(resolve_threads(threads), len(blocks))
    if workers <= 1:
        for lo, hi in blocks:
            out[lo:hi] = row_eval(lo, hi)
        return out
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(row_eval, lo, hi): (lo, hi) for lo, hi in blocks}
        for fut in as_completed(futures):
            lo, hi = futures[fut]
            out[lo:hi] = fut.result()
    return out


def _is_step(field) -> bool:
    return hasattr(field, "values") and hasattr(field, "x_edges")


def evaluate_operator_grid(cfg: OperatorConfig, field, xs, ys,
                           threads=None) -> np.ndarray:
    """Values of the configured operator applied to `field` on xs x ys."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if cfg.family is Family.GENERALIZED:
        grid = make_node_grid(cfg.n)

        def row_eval(lo, hi):
            return evaluate_generalized_grid(grid, cfg.s, field, xs[lo:hi], ys)
    elif cfg.family is Family.KANTOROVICH:
        grid = make_kantorovich_grid(cfg.n)
        if _is_step(field):
            cell_ints = step_cell_matrix(field.values, field.x_edges,
                                         field.y_edges, cfg.n)
        else:
            cell_ints = kantorovich_cell_integrals(field, cfg.n,
                                                   cfg.cell_subdivision)

        def row_eval(lo, hi):
            return evaluate_kantorovich_grid(grid, cfg.s, cell_ints,
                                             xs[lo:hi], ys)
    else:
        if field.derivatives is None:
            raise MissingDerivativesError(
                "hermite family needs a field with derivative data")
        grid = make_node_grid(cfg.n)

        def row_eval(lo, hi):
            return evaluate_hermite_grid(grid, cfg.s, cfg.r,
                                         field.derivatives, xs[lo:hi], ys)
    return map_rows(row_eval, xs.size, ys.size, threads)


def exact_grid(field: ComplexField, xs, ys) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    return np.asarray(field.value(xs[:, None], ys[None, :]), dtype=complex)


def error_rows(family: Family, field: ComplexField, n_list, s: float, r: int,
               grid_points: int, threads=None):
    """One ErrorReport per n, against the field on the standard grid."""
    xs = square_grid(grid_points)
    exact = exact_grid(field, xs, xs)
    rows = []
    for n in n_list:
        cfg = OperatorConfig(family=family, n=int(n), s=s, r=r)
        approx = evaluate_operator_grid(cfg, field, xs, xs, threads)
        rows.append((int(n), error_report(exact, approx)))
    return rows


def distance_sup(n: int, s: float, grid_points: int = RATE_GRID_POINTS,
                 grid_limit: float = RATE_GRID_LIMIT,
                 cell_points: int = 4) -> float:
    """sup over the test grid of the cell-averaged operator applied to
    the distance function w -> |w - z|, evaluated at z itself.

    This is the operator's intrinsic length scale: for smooth targets the
    approximation error is controlled by the modulus of continuity at this
    scale, so its decay in n is the observable convergence rate.

    The double sum over cells and the two-axis quadrature are fused into
    one einsum per grid point; the (2n*cell_points)^2 distance matrix is
    rebuilt per z because it depends on z in a non-separable way.
    """
    grid = make_kantorovich_grid(n)
    zs = np.linspace(-grid_limit, grid_limit, grid_points)
    gq, gw = leggauss(cell_points)
    edges = cell_edges(n)
    half = 1.0 / (2.0 * n)
    # flat per-cell quadrature abscissae (2n*cell_points) and weights
    U = (edges[:-1, None] + (gq[None, :] + 1.0) * half).ravel()
    wq = np.tile(gw * half, 2 * n)
    W = _axis_weights_anchors(grid, zs, s)
    S = W.sum(axis=1)
    Wq = np.repeat(W, cell_points, axis=1) * wq[None, :]
    P = (U[None, :] - zs[:, None]) ** 2
    best = 0.0
    for i in range(zs.size):
        D0 = P[i][:, None]
        for j in range(zs.size):
            D = np.sqrt(D0 + P[j][None, :])
            num = np.einsum("i,ij,j->", Wq[i], D, Wq[j])
            val = n * n * num / (S[i] * S[j])
            if val > best:
                best = float(val)
    return best


@dataclass(frozen=True)
class RateReport:
    """Distance-sup values over a list of n and the fitted decay rate."""

    s: float
    n_list: tuple
    sups: tuple
    estimate: RateEstimate


def distance_rate(s: float, n_list, grid_points: int = RATE_GRID_POINTS,
                  grid_limit: float = RATE_GRID_LIMIT) -> RateReport:
    if len(n_list) < 4:
        raise ValueError(f"need at least 4 values of n, got {len(n_list)}")
    sups = tuple(distance_sup(int(n), s, grid_points, grid_limit)
                 for n in n_list)
    est = fit_rate(list(n_list), list(sups))
    return RateReport(s=s, n_list=tuple(int(n) for n in n_list),
                      sups=sups, estimate=est)
