"""Brute-force reference quadrature for checking the assembled operators.

This module deliberately recomputes everything from the curve recipes: curves
are resampled at a multiple of the domain resolution, kernels are summed
directly and nothing is taken from ``operators``. A value is accepted only if
the results at ``multiplier`` and ``2 * multiplier`` agree.
"""

from __future__ import annotations

import logging
from typing import Callable, Sequence, Union

import numpy as np

from .errors import OracleError
from .geometry import CurveComponent, Domain

logger = logging.getLogger(__name__)

KERNELS = ("single_layer", "double_layer", "adjoint_double_layer")
MIN_MULTIPLIER = 8
FD_STEP = 1e-3
# derivative at 0 of the cubic through samples at 1, 2, 3, 4
CUBIC_SLOPE = np.array([-13.0 / 3.0, 19.0 / 2.0, -7.0, 11.0 / 6.0])

Density = Union[np.ndarray, Callable[[int, np.ndarray], np.ndarray]]


def trig_resample(values: np.ndarray, n_fine: int, shift: float = 0.0) -> np.ndarray:
    """Trigonometric interpolant of equispaced samples at shift + 2 pi k / n_fine.

    The Nyquist coefficient is split evenly between the two padded modes, as
    in FFT resampling, so the result is the real cosine interpolant.
    """
    n = values.shape[0]
    half = n // 2
    if n_fine < 2 * n:
        raise OracleError(f"Cannot resample {n} samples onto {n_fine} points")
    coeffs = np.fft.fft(values) / n
    padded = np.zeros(n_fine, dtype=complex)
    padded[:half] = coeffs[:half]
    padded[n_fine - half + 1 :] = coeffs[half + 1 :]
    padded[half] = 0.5 * coeffs[half]
    padded[n_fine - half] = 0.5 * coeffs[half]
    modes = np.fft.fftfreq(n_fine, 1.0 / n_fine)
    padded *= np.exp(1j * modes * shift)
    return (np.fft.ifft(padded) * n_fine).real


def _density_on(domain: Domain, density: Density, j: int, t: np.ndarray) -> np.ndarray:
    if callable(density):
        return np.asarray(density(j, t), dtype=float)
    values = np.asarray(density, dtype=float)
    return trig_resample(values[domain.slices[j]], t.shape[0], float(t[0]))


def _outward_normal(component: CurveComponent, velocity: np.ndarray) -> np.ndarray:
    sign = component.orientation * (1 if component.role == "outer" else -1)
    speed = np.hypot(velocity[:, 0], velocity[:, 1])
    return sign * np.column_stack((velocity[:, 1], -velocity[:, 0])) / speed[:, None]


def _log_kernel_integral(samples: np.ndarray) -> float:
    """int_0^{2pi} log(4 sin^2(u/2)) G(u) du from samples of G at u_k = 2 pi k/n."""
    n = samples.shape[0]
    coeffs = np.fft.fft(samples) / n
    modes = np.abs(np.fft.fftfreq(n, 1.0 / n))
    symbol = np.zeros(n)
    symbol[1:] = -2.0 * np.pi / modes[1:]
    return float((coeffs * symbol).sum().real)


def _component_sum(
    kernel: str,
    domain: Domain,
    density: Density,
    j: int,
    target: np.ndarray,
    target_normal: np.ndarray | None,
    n_fine: int,
    on_curve_t: float | None,
) -> float:
    component = domain.components[j]
    step = 2.0 * np.pi / n_fine
    if on_curve_t is None:
        tau = step * np.arange(n_fine)
    elif kernel == "single_layer":
        tau = on_curve_t + step * np.arange(n_fine)
    else:
        tau = on_curve_t + step * (np.arange(n_fine) + 0.5)

    points, velocity, _ = component.spec.evaluate(tau)
    speed = np.hypot(velocity[:, 0], velocity[:, 1])
    weighted = _density_on(domain, density, j, tau) * speed

    rel = points - target
    dist2 = rel[:, 0] ** 2 + rel[:, 1] ** 2

    if kernel == "single_layer":
        if on_curve_t is None:
            return float(step * np.sum(np.log(dist2) * weighted) / (4.0 * np.pi))
        # log|x - y|^2 = log(4 sin^2(u/2)) + smooth remainder, u = tau - t0
        u = step * np.arange(n_fine)
        sin2 = 4.0 * np.sin(u / 2.0) ** 2
        sin2[0] = 1.0
        dist2[0] = 1.0
        smooth = np.log(dist2 / sin2)
        smooth[0] = np.log(speed[0] ** 2)
        singular = _log_kernel_integral(weighted)
        return float((singular + step * np.sum(smooth * weighted)) / (4.0 * np.pi))

    if kernel == "double_layer":
        normal = _outward_normal(component, velocity)
        kernel_values = np.einsum("ij,ij->i", rel, normal) / dist2
    else:
        if target_normal is None:
            raise OracleError("adjoint_double_layer needs the target normal")
        kernel_values = -(rel @ np.asarray(target_normal, dtype=float)) / dist2
    return float(step * np.sum(kernel_values * weighted) / (2.0 * np.pi))


def _evaluate(
    kernel: str,
    domain: Domain,
    density: Density,
    target: np.ndarray,
    multiplier: int,
    on_curve: tuple[int, float] | None,
    target_normal: np.ndarray | None,
) -> float:
    total = 0.0
    for j, component in enumerate(domain.components):
        t0 = on_curve[1] if on_curve is not None and on_curve[0] == j else None
        total += _component_sum(
            kernel,
            domain,
            density,
            j,
            target,
            target_normal,
            multiplier * component.n_nodes,
            t0,
        )
    return total


def oracle_quadrature(
    kernel: str,
    density: Density,
    target: np.ndarray,
    multiplier: int = MIN_MULTIPLIER,
    *,
    domain: Domain,
    on_curve: tuple[int, float] | None = None,
    target_normal: np.ndarray | None = None,
    tol: float = 1e-9,
) -> float:
    """Reference value of a layer integral at one target.

    ``density`` is either nodal values on ``domain`` (trigonometrically
    interpolated) or a callable ``density(component_index, t)``. Targets on a
    boundary curve must be flagged with ``on_curve=(component_index, t0)``; the
    single layer then uses the spectral log split and the double-layer kernels
    a half-step shifted grid.
    """
    if kernel not in KERNELS:
        raise OracleError(f"Unknown kernel '{kernel}'. Available: {', '.join(KERNELS)}")
    if multiplier < MIN_MULTIPLIER:
        raise OracleError(f"Oracle multiplier must be at least {MIN_MULTIPLIER}, got {multiplier}")
    point = np.asarray(target, dtype=float)
    coarse = _evaluate(kernel, domain, density, point, multiplier, on_curve, target_normal)
    fine = _evaluate(kernel, domain, density, point, 2 * multiplier, on_curve, target_normal)
    if abs(fine - coarse) > tol * max(1.0, abs(fine)):
        raise OracleError(
            f"Oracle for {kernel} did not converge: {coarse:.15g} at {multiplier}x "
            f"vs {fine:.15g} at {2 * multiplier}x"
        )
    return fine


def oracle_on_nodes(
    kernel: str,
    domain: Domain,
    density: Density,
    multiplier: int = MIN_MULTIPLIER,
    tol: float = 1e-9,
) -> np.ndarray:
    """Oracle values at every boundary node, as a layer operator would produce."""
    values = np.empty(domain.n_nodes)
    for j, component in enumerate(domain.components):
        for i, index in enumerate(range(domain.slices[j].start, domain.slices[j].stop)):
            values[index] = oracle_quadrature(
                kernel,
                density,
                component.points[i],
                multiplier,
                domain=domain,
                on_curve=(j, float(component.t[i])),
                target_normal=component.normal[i],
                tol=tol,
            )
    logger.info(f"Oracle {kernel} evaluated at {domain.n_nodes} nodes ({multiplier}x)")
    return values


def double_layer_flux_by_differences(
    domain: Domain,
    density: np.ndarray,
    nodes: Sequence[int],
    step: float = FD_STEP,
) -> np.ndarray:
    """Normal derivative of the double-layer field at boundary nodes, from inside.

    The field is summed at distances step, 2 step, 3 step and 4 step along -nu
    on a grid with spacing at most step / 4, after subtracting the density
    value at the foot node (the double layer of a constant is that constant in
    the domain). The cubic through the four values is differentiated at the
    boundary.
    """
    psi = np.asarray(density, dtype=float)
    fine = []
    for j, component in enumerate(domain.components):
        multiplier = max(MIN_MULTIPLIER, int(np.ceil(4.0 * component.weights.max() / step)))
        n_fine = multiplier * component.n_nodes
        tau = 2.0 * np.pi * np.arange(n_fine) / n_fine
        points, velocity, _ = component.spec.evaluate(tau)
        weights = (2.0 * np.pi / n_fine) * np.hypot(velocity[:, 0], velocity[:, 1])
        values = trig_resample(psi[domain.slices[j]], n_fine)
        fine.append((points, _outward_normal(component, velocity), values, weights))

    flux = np.empty(len(nodes))
    for i, index in enumerate(nodes):
        foot, nu, foot_value = domain.points[index], domain.normals[index], psi[index]
        samples = np.empty(len(CUBIC_SLOPE))
        for k in range(len(CUBIC_SLOPE)):
            target = foot - (k + 1) * step * nu
            total = foot_value
            for points, normal, values, weights in fine:
                rel = points - target
                kernel = np.einsum("ij,ij->i", rel, normal) / (rel**2).sum(axis=1)
                total += kernel @ ((values - foot_value) * weights) / (2.0 * np.pi)
            samples[k] = total
        # d/dnu = -d/dd along the inward ray
        flux[i] = -float(CUBIC_SLOPE @ samples) / step
    logger.info(f"Double-layer flux differenced at {len(nodes)} nodes (step {step:g})")
    return flux
