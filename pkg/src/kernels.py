"""Fundamental solution of the planar Laplacian and its normal derivatives.

All functions broadcast over leading axes: ``x`` and ``y`` are arrays of shape
(..., 2), normals likewise. Coincident points raise ``KernelError``.
"""

from __future__ import annotations

import numpy as np

from .errors import KernelError

COINCIDENCE_TOL = 1e-14
_TWO_PI = 2.0 * np.pi


def _separation(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r2 = diff[..., 0] ** 2 + diff[..., 1] ** 2
    if np.any(r2 <= COINCIDENCE_TOL**2):
        raise KernelError("Kernel evaluated at coincident points")
    return diff, r2


def fund_solution(x: np.ndarray, y: np.ndarray) -> np.ndarray | float:
    """s(x, y) = log|x - y| / (2 pi)."""
    _, r2 = _separation(x, y)
    value = np.log(r2) / (2.0 * _TWO_PI)
    return float(value) if np.ndim(value) == 0 else value


def dnu_y_s(x: np.ndarray, y: np.ndarray, nu_y: np.ndarray) -> np.ndarray | float:
    """Normal derivative of s with respect to the source point y."""
    diff, r2 = _separation(y, x)
    value = np.einsum("...i,...i->...", diff, np.asarray(nu_y, dtype=float))
    value = value / (_TWO_PI * r2)
    return float(value) if np.ndim(value) == 0 else value


def dnu_x_s(x: np.ndarray, y: np.ndarray, nu_x: np.ndarray) -> np.ndarray | float:
    """Normal derivative of s with respect to the target point x."""
    diff, r2 = _separation(x, y)
    value = np.einsum("...i,...i->...", diff, np.asarray(nu_x, dtype=float))
    value = value / (_TWO_PI * r2)
    return float(value) if np.ndim(value) == 0 else value


def double_layer_diagonal(curvature: np.ndarray) -> np.ndarray:
    """Limit of dnu_y_s as y -> x along a smooth curve."""
    return np.asarray(curvature, dtype=float) / (2.0 * _TWO_PI)
