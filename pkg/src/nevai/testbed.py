"""Built-in target functions for the experiments.

Seven complex-valued functions on the square, named f1..f4 and g1..g3,
plus a constant reference target `const` for smoke checks.  The analytic
ones (f3, f4, g3, const) carry closed-form complex derivatives so the
Taylor-based family can be applied to them; the discontinuous ones declare
the vertical lines where they jump so cell integrals can be split there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import PairingError, UnknownFunctionError
from .operators import ComplexField


@dataclass(frozen=True)
class NamedFunction:
    id: str
    field: ComplexField
    break_lines: Tuple[float, ...]
    analytic: bool


def _f1_value(x, y):
    z = np.asarray(x) + 1j * np.asarray(y)
    return np.exp(-np.abs(z) ** 2) * (z - np.conj(z)) * np.exp(6j * np.angle(z))


def _f2_value(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.floor(3 * x) + 1j * (1 - x * x / 2 - y * y / 2)


def _f3_value(x, y):
    z = np.asarray(x) + 1j * np.asarray(y)
    return np.exp(1j * np.pi * z)


def _f3_deriv(j, z):
    return (1j * np.pi) ** j * np.exp(1j * np.pi * np.asarray(z))


_F4_COEF = np.array([0.15, 0.0, -0.75, 0.0, 0.5])


def _f4_value(x, y):
    z = np.asarray(x) + 1j * np.asarray(y)
    return npoly.polyval(z, _F4_COEF)


def _f4_deriv(j, z):
    c = npoly.polyder(_F4_COEF, j) if j else _F4_COEF
    return npoly.polyval(np.asarray(z), c)


def _g1_value(x, y):
    return np.asarray(x) - 1j * np.asarray(y)


def _g2_value(x, y):
    z = np.asarray(x) + 1j * np.asarray(y)
    return np.where(np.asarray(x) >= 0, z, 2 * z)


def _g3_value(x, y):
    z = np.asarray(x) + 1j * np.asarray(y)
    return np.sin(z * z)


# d^j/dz^j sin(z^2) = P_j(z) sin(z^2) + Q_j(z) cos(z^2) with the recursion
# P' - 2z Q -> P, Q' + 2z P -> Q; the pairs are cached as they are needed.
_G3_PQ = [(np.array([1.0]), np.array([0.0]))]


def _g3_deriv(j, z):
    while len(_G3_PQ) <= j:
        p, q = _G3_PQ[-1]
        _G3_PQ.append((npoly.polysub(npoly.polyder(p), 2 * npoly.polymulx(q)),
                       npoly.polyadd(npoly.polyder(q), 2 * npoly.polymulx(p))))
    p, q = _G3_PQ[j]
    z = np.asarray(z)
    return npoly.polyval(z, p) * np.sin(z * z) + npoly.polyval(z, q) * np.cos(z * z)


_CONST = 2.0 - 3.0j


def _const_value(x, y):
    shape = np.broadcast_shapes(np.shape(x), np.shape(y))
    return np.full(shape, _CONST)


def _const_deriv(j, z):
    z = np.asarray(z, dtype=complex)
    return np.full(z.shape, _CONST) if j == 0 else np.zeros(z.shape, dtype=complex)


_F2_BREAKS = tuple(j / 3 for j in range(-3, 4))

_REGISTRY = {
    "const": NamedFunction("const", ComplexField(_const_value,
                                                 derivatives=_const_deriv), (), True),
    "f1": NamedFunction("f1", ComplexField(_f1_value), (), False),
    "f2": NamedFunction("f2", ComplexField(_f2_value, integrable_only=True,
                                           break_lines=_F2_BREAKS), _F2_BREAKS, False),
    "f3": NamedFunction("f3", ComplexField(_f3_value, derivatives=_f3_deriv), (), True),
    "f4": NamedFunction("f4", ComplexField(_f4_value, derivatives=_f4_deriv), (), True),
    "g1": NamedFunction("g1", ComplexField(_g1_value), (), False),
    "g2": NamedFunction("g2", ComplexField(_g2_value, integrable_only=True,
                                           break_lines=(0.0,)), (0.0,), False),
    "g3": NamedFunction("g3", ComplexField(_g3_value, derivatives=_g3_deriv), (), True),
}

FUNCTION_IDS = tuple(sorted(_REGISTRY))


def lookup(fid: str) -> NamedFunction:
    """Return the registered function, or raise for an unknown id."""
    try:
        return _REGISTRY[fid]
    except KeyError:
        raise UnknownFunctionError(f"unknown function id {fid!r}; "
                                   f"choose from {', '.join(FUNCTION_IDS)}") from None


def require_taylor_compatible(fn: NamedFunction):
    """Reject Taylor-based evaluation for functions without derivatives."""
    if not fn.analytic:
        raise PairingError(f"{fn.id} has no complex derivatives; the hermite "
                           "family applies only to f3, f4, g3")
