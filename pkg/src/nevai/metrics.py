"""Error measures, image quality measures, and empirical rate fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatchError

PSNR_INFINITE = math.inf

_MODULUS_SEED = 20240915  # fixed so the sample pool is reproducible


@dataclass(frozen=True)
class ErrorReport:
    """Componentwise error summary over an evaluation grid.

    Carries max / mean / root-mean-square of the absolute real-part and
    imaginary-part deviations; the ordering e_mean <= e_ms <= e_max holds on
    every report by the power-mean inequality.
    """

    e_max_re: float
    e_mean_re: float
    e_ms_re: float
    e_max_im: float
    e_mean_im: float
    e_ms_im: float
    n_points: int

    FIELDS = ("e_max_re", "e_mean_re", "e_ms_re", "e_max_im", "e_mean_im", "e_ms_im")


@dataclass(frozen=True)
class ImageQuality:
    ssim: float
    psnr_db: float
    rmse: float
    dynamic_range_L: float
    k1: float = 0.01
    k2: float = 0.03


@dataclass(frozen=True)
class RateEstimate:
    """Fitted slope of log(error) against log(n), with a log-factor flag."""

    exponent: float
    log_factor_detected: bool


def _same_shape(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b


def error_report(exact, approx) -> ErrorReport:
    """Six-field error summary between two complex grids of equal shape."""
    exact, approx = _same_shape(exact, approx)
    if exact.size < 1:
        raise ShapeMismatchError("grids must contain at least one point")
    dre = np.abs(np.real(exact) - np.real(approx))
    dim = np.abs(np.imag(exact) - np.imag(approx))
    return ErrorReport(
        e_max_re=float(dre.max()),
        e_mean_re=float(dre.mean()),
        e_ms_re=float(np.sqrt((dre * dre).mean())),
        e_max_im=float(dim.max()),
        e_mean_im=float(dim.mean()),
        e_ms_im=float(np.sqrt((dim * dim).mean())),
        n_points=exact.size,
    )


def ssim_global(H, W, L: float = 1.0, window: int | None = None) -> float:
    """Structural similarity from whole-image statistics.

    The default is a single global index built from the image means,
    variances, and covariance with stabilizers d1 = (0.01 L)^2 and
    d2 = (0.03 L)^2.  Passing `window` switches to a mean of sliding-window
    local indices (same formula per window); that variant is provided for
    comparison and is never used by the bundled experiments.
    """
    H, W = _same_shape(H, W)
    H = H.astype(float)
    W = W.astype(float)
    if window is not None:
        return _ssim_windowed(H, W, L, window)
    d1 = (0.01 * L) ** 2
    d2 = (0.03 * L) ** 2
    mh = H.mean()
    mw = W.mean()
    vh = H.var()
    vw = W.var()
    cov = ((H - mh) * (W - mw)).mean()
    return float(((2 * mh * mw + d1) * (2 * cov + d2))
                 / ((mh * mh + mw * mw + d1) * (vh + vw + d2)))


def _ssim_windowed(H, W, L, window):
    if window < 1 or window > min(H.shape):
        raise ShapeMismatchError(f"window {window} does not fit image {H.shape}")
    vals = []
    for i in range(H.shape[0] - window + 1):
        for j in range(H.shape[1] - window + 1):
            vals.append(ssim_global(H[i:i + window, j:j + window],
                                    W[i:i + window, j:j + window], L))
    return float(np.mean(vals))


def psnr(H, W, max_value: float) -> float:
    """Peak signal-to-noise ratio in dB; +inf when the images coincide."""
    H, W = _same_shape(H, W)
    mse = float(((H.astype(float) - W.astype(float)) ** 2).mean())
    if mse == 0.0:
        return PSNR_INFINITE
    return float(10.0 * np.log10(max_value * max_value / mse))


def rmse(H, W) -> float:
    H, W = _same_shape(H, W)
    return float(np.sqrt(((H.astype(float) - W.astype(float)) ** 2).mean()))


def image_quality(H, W, L: float) -> ImageQuality:
    return ImageQuality(ssim=ssim_global(H, W, L), psnr_db=psnr(H, W, L),
                        rmse=rmse(H, W), dynamic_range_L=L)


def estimate_modulus(field, delta: float, samples: int = 1000) -> float:
    """Lower estimate of the modulus of continuity at scale delta.

    Maximizes |f(p) - f(q)| over all pairs from a fixed pseudorandom pool of
    `samples` points in the square whose Euclidean distance is at most
    delta.  The pool depends only on `samples`, so for a fixed pool the
    estimate is monotone nondecreasing in delta, and it approaches the true
    modulus from below as the pool grows.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    rng = np.random.default_rng(_MODULUS_SEED)
    pts = rng.uniform(-1.0, 1.0, size=(samples, 2))
    vals = np.asarray(field.value(pts[:, 0], pts[:, 1]))
    best = 0.0
    d2max = delta * delta
    for i in range(0, samples, 256):
        blk = slice(i, min(i + 256, samples))
        d2 = ((pts[blk, None, 0] - pts[None, :, 0]) ** 2
              + (pts[blk, None, 1] - pts[None, :, 1]) ** 2)
        diff = np.abs(vals[blk, None] - vals[None, :])
        diff[d2 > d2max] = 0.0
        best = max(best, float(diff.max()))
    return best


def fit_rate(ns, errors) -> RateEstimate:
    """Least-squares decay exponent of errors against n.

    Fits log(error) = a + exponent * log(n).  The log-factor flag is set
    when refitting errors / log(n) shrinks the sum of squared residuals by
    at least 20 percent, which distinguishes log(n)/n sequences from plain
    power laws; an (almost) exact power-law fit leaves nothing to improve
    and keeps the flag off.
    """
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if ns.size < 4:
        raise ValueError(f"need at least 4 sample sizes, got {ns.size}")
    if np.all(ns == ns[0]):
        raise ValueError("all n values are equal; slope is undefined")
    if np.any(errors <= 0):
        raise ValueError("errors must be positive to fit a log-log slope")
    L = np.log(ns)
    A = np.vstack([L, np.ones_like(L)]).T

    def solve(E):
        coef, *_ = np.linalg.lstsq(A, E, rcond=None)
        return coef, float(((A @ coef - E) ** 2).sum())

    coef, ssr = solve(np.log(errors))
    detected = False
    if ssr > 1e-20 and np.all(ns > 1):
        _, ssr_div = solve(np.log(errors / L))
        detected = (ssr - ssr_div) / ssr >= 0.2
    return RateEstimate(exponent=float(coef[0]), log_factor_detected=detected)
