"""Interior evaluation of layer potentials and solved fields.

Plain trapezoid quadrature is used at every target. Accuracy degrades within a
few node spacings of the boundary; probes should stay at least 0.1 away.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import EvaluationError
from .geometry import Domain
from .kernels import dnu_y_s, fund_solution
from .operators import ArrayLike, LayerOperators, as_values
from .solvers import DirichletSolution, NeumannSolution, RobinSolution

logger = logging.getLogger(__name__)

Solution = Union[RobinSolution, NeumannSolution, DirichletSolution]


@dataclass(frozen=True)
class FieldSample:
    point: tuple[float, float]
    value: float
    distance: float


def _interior_points(domain: Domain, x: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(np.asarray(x, dtype=float))
    try:
        inside = domain.contains(points)
    except ValueError as e:
        raise EvaluationError(f"Cannot classify evaluation point: {e}") from e
    if not np.all(inside):
        bad = points[~inside][0]
        raise EvaluationError(f"Point ({bad[0]:.6g}, {bad[1]:.6g}) is not inside the domain")
    return points


def _shape_like(x: np.ndarray, values: np.ndarray):
    return float(values[0]) if np.ndim(x) == 1 else values


def eval_single_layer(domain: Domain, phi: ArrayLike, x: np.ndarray):
    points = _interior_points(domain, x)
    density = as_values(domain, phi) * domain.weights
    values = fund_solution(points[:, None, :], domain.points[None, :, :]) @ density
    return _shape_like(np.asarray(x), values)


def eval_double_layer(domain: Domain, psi: ArrayLike, x: np.ndarray):
    points = _interior_points(domain, x)
    density = as_values(domain, psi) * domain.weights
    kernel = dnu_y_s(points[:, None, :], domain.points[None, :, :], domain.normals[None, :, :])
    return _shape_like(np.asarray(x), kernel @ density)


def _charge_field(domain: Domain, charges: np.ndarray, points: np.ndarray) -> np.ndarray:
    total = np.zeros(points.shape[0])
    for j, charge in enumerate(charges, start=1):
        if charge:
            total += charge * eval_single_layer(domain, domain.indicator(j), points)
    return total


def eval_solution(solution: Solution, points: np.ndarray):
    domain = solution.domain
    pts = _interior_points(domain, points)
    if isinstance(solution, RobinSolution):
        values = eval_double_layer(domain, solution.psi, pts)
        values = values + _charge_field(domain, solution.charges, pts)
    elif isinstance(solution, NeumannSolution):
        values = eval_double_layer(domain, solution.psi, pts)
        values = values + _charge_field(domain, solution.charges, pts) + solution.offset
    elif isinstance(solution, DirichletSolution):
        values = eval_single_layer(domain, solution.density, pts) + solution.constant
    else:
        raise EvaluationError(f"Unsupported solution type {type(solution).__name__}")
    return _shape_like(np.asarray(points), values)


def sample_field(solution: Solution, points: np.ndarray) -> list[FieldSample]:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.atleast_1d(eval_solution(solution, pts))
    distances = solution.domain.distance_to_boundary(pts)
    return [
        FieldSample((float(p[0]), float(p[1])), float(v), float(d))
        for p, v, d in zip(pts, values, distances)
    ]


def _robin_boundary_data(
    domain: Domain, solution: RobinSolution, operators: LayerOperators | None
) -> tuple[np.ndarray, np.ndarray]:
    """Interior trace and normal derivative of a Robin field at the nodes."""
    if solution.domain.domain_id != domain.domain_id:
        raise EvaluationError("Solution was computed on another domain")
    ops = operators if operators is not None else LayerOperators(domain)
    psi = solution.psi.values
    normal = ops.T @ (ops.S @ (ops.T @ psi))
    trace = ops.interior_trace_of_double_layer(psi)
    for j, charge in enumerate(solution.charges, start=1):
        chi = domain.indicator(j)
        normal = normal + charge * ops.interior_normal_derivative_of_single_layer(chi)
        trace = trace + charge * (ops.S @ chi)
    return trace, normal


def boundary_residual_robin(
    domain: Domain,
    solution: RobinSolution,
    h: ArrayLike,
    g: ArrayLike,
    operators: LayerOperators | None = None,
) -> float:
    """Max-norm of du/dnu + h u - g with du/dnu from d/ds S d/ds."""
    trace, normal = _robin_boundary_data(domain, solution, operators)
    residual = normal + as_values(domain, h) * trace - as_values(domain, g)
    return float(np.max(np.abs(residual)))


def energy_residual(
    domain: Domain,
    solution: RobinSolution,
    h: ArrayLike,
    g: ArrayLike,
    operators: LayerOperators | None = None,
) -> float:
    """|int u (du/dnu + h u - g) dsigma| over the whole boundary."""
    trace, normal = _robin_boundary_data(domain, solution, operators)
    integrand = trace * (normal + as_values(domain, h) * trace - as_values(domain, g))
    return abs(float(domain.weights @ integrand))


def five_point_laplacian(
    field: Callable[[np.ndarray], np.ndarray], points: np.ndarray, step: float = 1e-3
) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    centre = np.asarray(field(pts))
    total = -4.0 * centre
    for shift in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
        total = total + np.asarray(field(pts + np.array(shift)))
    return total / step**2


def mean_value_defect(
    field: Callable[[np.ndarray], np.ndarray],
    center: np.ndarray,
    radius: float,
    samples: int = 64,
) -> float:
    """|u(center) - average of u over the circle of the given radius|."""
    angles = 2.0 * np.pi * np.arange(samples) / samples
    ring = np.asarray(center, dtype=float) + radius * np.column_stack((np.cos(angles), np.sin(angles)))
    centre_value = float(np.atleast_1d(field(np.asarray(center, dtype=float)[None, :]))[0])
    return abs(centre_value - float(np.mean(field(ring))))
