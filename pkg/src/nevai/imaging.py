"""Amplitude-and-phase image model and cell-averaged reconstruction.

An image is embedded into the square as a pair of step functions: pixel
(i, j) (1-based, i indexing rows/height) owns the half-open box
(i-1, i] x (j-1, j] in pixel coordinates, affinely rescaled onto
[-1, 1] x [-1, 1], with the row index i mapped to the x axis.  The
cell-averaged operator family is then applied to each channel separately;
its cell integrals over a piecewise-constant field are overlap sums, so the
reconstruction pipeline contains no quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from PIL import Image

from .errors import DomainError, ShapeMismatchError
from .evaluation import map_rows
from .metrics import image_quality
from .operators import evaluate_kantorovich_grid, make_kantorovich_grid
from .quadrature import step_cell_matrix

_AMPLITUDE_SLACK = 1e-12


class Channel(Enum):
    AMPLITUDE = "amplitude"
    PHASE = "phase"


def wrap_phase(phi):
    """Wrap angles into [-pi, pi)."""
    return np.mod(np.asarray(phi, dtype=float) + np.pi, 2.0 * np.pi) - np.pi


@dataclass(frozen=True)
class ComplexImage:
    """Amplitude in [0, 1] and phase in radians, on a common pixel grid."""

    amplitude: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitude, dtype=float, copy=True)
        ph = np.array(self.phase, dtype=float, copy=True)
        if amp.ndim != 2 or amp.shape[0] < 1 or amp.shape[1] < 1:
            raise ShapeMismatchError(f"amplitude must be a 2-D matrix, got {amp.shape}")
        if amp.shape != ph.shape:
            raise ShapeMismatchError(
                f"amplitude {amp.shape} and phase {ph.shape} differ in shape")
        if amp.min() < -_AMPLITUDE_SLACK or amp.max() > 1.0 + _AMPLITUDE_SLACK:
            raise DomainError(
                f"amplitude entries outside [0, 1]: range [{amp.min()}, {amp.max()}]")
        amp = np.clip(amp, 0.0, 1.0)
        ph = wrap_phase(ph)
        amp.flags.writeable = False
        ph.flags.writeable = False
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", ph)

    @property
    def height(self) -> int:
        return self.amplitude.shape[0]

    @property
    def width(self) -> int:
        return self.amplitude.shape[1]

    def complex_values(self) -> np.ndarray:
        return self.amplitude * np.exp(1j * self.phase)

    @classmethod
    def from_amplitude(cls, amplitude) -> "ComplexImage":
        amplitude = np.asarray(amplitude, dtype=float)
        return cls(amplitude=amplitude, phase=np.zeros_like(amplitude))


def _pixel_edges(count: int) -> np.ndarray:
    return -1.0 + 2.0 * np.arange(count + 1) / count


def pixel_centers(count: int) -> np.ndarray:
    """Centers of `count` pixels tiling [-1, 1]: -1 + (2i - 1)/count."""
    return -1.0 + (2.0 * np.arange(1, count + 1) - 1.0) / count


def pixel_index(coord, count: int):
    """1-based index of the half-open pixel box containing each coordinate.

    Boxes are open below and closed above, so a point exactly on an
    interior edge belongs to the lower box (up to float representation of
    the edge itself).
    """
    idx = np.ceil((np.asarray(coord, dtype=float) + 1.0) * count / 2.0)
    return np.clip(idx, 1, count).astype(int)


@dataclass(frozen=True)
class StepField:
    """One channel of an image as a piecewise-constant field on the square.

    Exposes the same evaluation surface as a plain field (`value`,
    `derivatives`, `break_lines`) plus `values`/`x_edges`/`y_edges` for the
    exact overlap-sum integral path.
    """

    source: ComplexImage
    channel: Channel
    values: np.ndarray
    x_edges: np.ndarray
    y_edges: np.ndarray

    derivatives = None
    integrable_only = True
    break_lines = ()

    def value(self, x, y):
        i = pixel_index(x, self.values.shape[0])
        j = pixel_index(y, self.values.shape[1])
        return self.values[i - 1, j - 1]


def embed(img: ComplexImage, channel: Channel) -> StepField:
    """The indicator-sum step field of one image channel on the square."""
    values = img.amplitude if channel is Channel.AMPLITUDE else img.phase
    return StepField(source=img, channel=channel, values=values,
                     x_edges=_pixel_edges(img.height),
                     y_edges=_pixel_edges(img.width))


def _reconstruct_channel(field: StepField, n: int, s: float, xs, ys,
                         threads) -> np.ndarray:
    grid = make_kantorovich_grid(n)
    cells = step_cell_matrix(field.values, field.x_edges, field.y_edges, n)

    def row_eval(lo, hi):
        return evaluate_kantorovich_grid(grid, s, cells, xs[lo:hi], ys)

    return map_rows(row_eval, xs.size, ys.size, threads, dtype=float)


def reconstruct(img: ComplexImage, n: int, s: float = 2.0, out_shape=None,
                threads=None) -> ComplexImage:
    """Cell-averaged reconstruction of both channels at pixel centers.

    The operator is sampled at the pixel-center grid of `out_shape`
    (default: the input shape).  Amplitude is clamped back to [0, 1] and
    phase rewrapped; no unwrapping is attempted, phase is treated as a raw
    scalar channel.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    u_out, v_out = out_shape if out_shape is not None else (img.height, img.width)
    xs = pixel_centers(int(u_out))
    ys = pixel_centers(int(v_out))
    amp = _reconstruct_channel(embed(img, Channel.AMPLITUDE), n, s, xs, ys, threads)
    ph = _reconstruct_channel(embed(img, Channel.PHASE), n, s, xs, ys, threads)
    return ComplexImage(amplitude=np.clip(amp, 0.0, 1.0), phase=wrap_phase(ph))


def reconstruction_quality(original: ComplexImage, rebuilt: ComplexImage):
    """Per-channel quality metrics; amplitude range 1, phase range 2*pi."""
    return {
        "amplitude": image_quality(original.amplitude, rebuilt.amplitude, 1.0),
        "phase": image_quality(original.phase, rebuilt.phase, 2.0 * np.pi),
    }


def quantize_amplitude(amplitude) -> np.ndarray:
    """Snap to the 256 representable 8-bit gray levels (round(a*255)/255)."""
    return np.round(np.asarray(amplitude, dtype=float) * 255.0) / 255.0


def synthetic_image(size: int = 128) -> ComplexImage:
    """Reproducible grayscale test image with mixed smooth and jump content.

    Combines a low-frequency product wave, two Gaussian bumps, a sign
    checkerboard (jump discontinuities for the cell-averaged family to
    smooth), and an oblique chirp, then quantizes to 8-bit levels.  Phase
    channel is zero.
    """
    c = pixel_centers(size)
    X = c[:, None]
    Y = c[None, :]
    a = (0.5
         + 0.16 * np.sin(2.4 * np.pi * X) * np.cos(1.7 * np.pi * Y)
         + 0.22 * np.exp(-((X - 0.35) ** 2 + (Y + 0.25) ** 2) / 0.05)
         - 0.18 * np.exp(-((X + 0.45) ** 2 + (Y - 0.40) ** 2) / 0.03)
         + 0.10 * np.sign(np.sin(6.0 * np.pi * X) * np.sin(4.0 * np.pi * Y))
         + 0.07 * np.sin(9.0 * np.pi * (X + 0.3) * (Y - 0.1)))
    amp = quantize_amplitude(np.clip(a, 0.0, 1.0))
    return ComplexImage.from_amplitude(amp)


def to_gray8(amplitude) -> np.ndarray:
    return np.round(np.asarray(amplitude, dtype=float) * 255.0).astype(np.uint8)


def load_amplitude(path) -> np.ndarray:
    """Read any grayscale-convertible image file as amplitudes in [0, 1]."""
    with Image.open(path) as im:
        gray = np.asarray(im.convert("L"), dtype=float)
    return gray / 255.0


def write_pgm(path, amplitude):
    """8-bit binary PGM; header and payload are fully deterministic."""
    gray = to_gray8(amplitude)
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (gray.shape[1], gray.shape[0]))
        fh.write(gray.tobytes(order="C"))


def write_png(path, amplitude):
    Image.fromarray(to_gray8(amplitude), mode="L").save(path, format="PNG")


def write_phase_csv(path, phase):
    """Float matrix in radians, row-major, first line 'rows,cols'."""
    phase = np.asarray(phase, dtype=float)
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{phase.shape[0]},{phase.shape[1]}\n")
        for row in phase:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_phase_csv(path) -> np.ndarray:
    with open(path) as fh:
        first = fh.readline().strip()
        rows, cols = (int(tok) for tok in first.split(","))
        phase = np.loadtxt(fh, delimiter=",", ndmin=2)
    if phase.shape != (rows, cols):
        raise ShapeMismatchError(
            f"phase matrix is {phase.shape}, header says ({rows}, {cols})")
    return phase
