"""Orthonormal Chebyshev polynomials, their zeros, and kernel machinery.

Everything here works with the orthonormalized first-kind family on [-1, 1]:

    T_0(x) = 1/sqrt(pi),    T_j(x) = sqrt(2/pi) * cos(j * arccos x)  for j >= 1.

The two-point kernel is evaluated through the quotient

    K_n(v, t) = (T_n(v) T_{n-1}(t) - T_{n-1}(v) T_n(t)) / (v - t)

with a derivative-based confluent branch near v = t.  The quotient carries
the leading-coefficient ratio of the family (a constant factor 2 for n >= 2
relative to the plain sum of squares), which cancels in every weight ratio
built on top of it; `ChebyshevBasis.diag_kernel` stores the sum-of-squares
normalization instead so that ``cotes * diag_kernel == 1`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_DOMAIN_SLACK = 1e-12
_CONFLUENCE_EPS = 1e-9

_SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)
_INV_SQRT_PI = 1.0 / np.sqrt(np.pi)


def _clamp_domain(x):
    """Validate |x| <= 1 up to a tolerance band and clamp into [-1, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _DOMAIN_SLACK):
        bad = np.asarray(x)[np.abs(x) > 1.0 + _DOMAIN_SLACK]
        raise DomainError(f"argument outside [-1, 1]: {bad.flat[0]}")
    return np.clip(x, -1.0, 1.0)


def orthonormal_T(j: int, x):
    """Evaluate the orthonormal Chebyshev polynomial of degree j.

    Parameters
    ----------
    j : int
        Degree, j >= 0.
    x : float or ndarray
        Points in [-1, 1] (a 1e-12 slack band is clamped).

    Returns
    -------
    float or ndarray
    """
    if j < 0:
        raise DomainError(f"negative degree {j}")
    x = _clamp_domain(x)
    if j == 0:
        return np.full_like(x, _INV_SQRT_PI) if x.ndim else float(_INV_SQRT_PI)
    out = _SQRT_2_OVER_PI * np.cos(j * np.arccos(x))
    return out if x.ndim else float(out)


def orthonormal_T_deriv(j: int, x):
    """Derivative of the orthonormal Chebyshev polynomial of degree j.

    Uses sqrt(2/pi) * j * sin(j arccos x) / sqrt(1 - x^2) in the interior and
    the analytic limits j^2 * sqrt(2/pi) * (+-1)^(j+1) at the endpoints, where
    the sin/sqrt form is 0/0.
    """
    if j < 0:
        raise DomainError(f"negative degree {j}")
    x = _clamp_domain(x)
    if j == 0:
        return np.zeros_like(x) if x.ndim else 0.0
    theta = np.arccos(x)
    sin_t = np.sin(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = _SQRT_2_OVER_PI * j * np.sin(j * theta) / sin_t
    endpoint = sin_t < 1e-150
    if np.any(endpoint):
        lim_pos = j * j * _SQRT_2_OVER_PI
        lim = np.where(np.asarray(x) > 0, lim_pos, lim_pos * (-1.0) ** (j + 1))
        out = np.where(endpoint, lim, out)
    return out if x.ndim else float(out)


@dataclass(frozen=True)
class ChebyshevBasis:
    """Node/weight/kernel data for a fixed degree n.

    Attributes
    ----------
    n : int
        Degree and node count.
    nodes : ndarray
        The n zeros cos((2k-1) pi / (2n)), k = 1..n, strictly decreasing.
    cotes : ndarray
        Quadrature weights 1 / sum_{j<=n} T_j(x_k)^2 (equal to pi/n here).
    diag_kernel : ndarray
        sum_{j<=n} T_j(x_k)^2, the reciprocal of `cotes`.
    """

    n: int
    nodes: np.ndarray
    cotes: np.ndarray
    diag_kernel: np.ndarray


def make_basis(n: int) -> ChebyshevBasis:
    """Build the node/weight data for degree n >= 1."""
    if n < 1:
        raise DomainError(f"degree must be positive, got {n}")
    k = np.arange(1, n + 1)
    nodes = np.cos((2 * k - 1) * np.pi / (2 * n))
    sums = np.zeros(n)
    for j in range(n + 1):
        tj = orthonormal_T(j, nodes)
        sums += tj * tj
    cotes = 1.0 / sums
    return ChebyshevBasis(n=n, nodes=nodes, cotes=cotes, diag_kernel=sums)


def cd_kernel(basis: ChebyshevBasis, v: float, t: float) -> float:
    """Two-point kernel K_n(v, t) for a single pair of points."""
    return float(kernel_row(basis, v, np.asarray([t], dtype=float))[0])


def kernel_row(basis: ChebyshevBasis, v: float, t: np.ndarray) -> np.ndarray:
    """Evaluate K_n(v, t) for one v against a vector of t values.

    The quotient form is used wherever |v - t| >= 1e-9; below that the
    relative cancellation in the numerator exceeds what double precision
    supports, so the derivative-based limit

        T_n'(v) T_{n-1}(v) - T_{n-1}'(v) T_n(v)

    is substituted.
    """
    n = basis.n
    t = np.asarray(t, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    tn_v = orthonormal_T(n, v_arr)
    tn1_v = orthonormal_T(n - 1, v_arr)
    num = tn_v * orthonormal_T(n - 1, t) - tn1_v * orthonormal_T(n, t)
    d = v_arr - t
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / d
    confluent = np.abs(d) < _CONFLUENCE_EPS
    if np.any(confluent):
        lim = (orthonormal_T_deriv(n, v_arr) * tn1_v
               - orthonormal_T_deriv(n - 1, v_arr) * tn_v)
        out = np.where(confluent, lim, out)
    return out


def kernel_matrix(basis: ChebyshevBasis, v: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Evaluate K_n(v_i, t_j) for vectors of v and t, shape (len(v), len(t))."""
    v = np.asarray(v, dtype=float)
    out = np.empty((v.size, np.asarray(t).size))
    for i, vi in enumerate(v):
        out[i] = kernel_row(basis, float(vi), t)
    return out
