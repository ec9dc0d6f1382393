"""Closed-form harmonic fields used to generate boundary data and exact errors."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .errors import GeometryError, ManufacturedCaseError
from .geometry import Domain

logger = logging.getLogger(__name__)

Field = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class ManufacturedCase:
    name: str
    params: dict[str, Any]
    exact: Field
    trace: np.ndarray
    normal_derivative: np.ndarray

    def robin_data(self, h: np.ndarray | float) -> np.ndarray:
        return self.normal_derivative + np.asarray(h, dtype=float) * self.trace

    @property
    def neumann_data(self) -> np.ndarray:
        return self.normal_derivative

    @property
    def dirichlet_data(self) -> np.ndarray:
        return self.trace

    def data_for(self, problem: str, h: np.ndarray | float = 0.0) -> np.ndarray:
        if problem == "robin":
            return self.robin_data(h)
        if problem == "neumann":
            return self.neumann_data
        if problem == "dirichlet":
            return self.dirichlet_data
        raise ManufacturedCaseError(f"Unknown problem kind: {problem}")


@dataclass(frozen=True)
class _HarmonicField:
    value: Field
    gradient: Callable[[np.ndarray], np.ndarray]
    singularities: tuple[tuple[float, float], ...] = field(default_factory=tuple)


def _require_outside(domain: Domain, point: np.ndarray) -> None:
    try:
        inside = bool(domain.contains(point[None, :])[0])
    except GeometryError as e:
        raise ManufacturedCaseError(f"Singular point {tuple(point)} lies on the boundary") from e
    if inside:
        raise ManufacturedCaseError(f"Singular point {tuple(point)} lies inside the domain")


def _point(value: Any, name: str) -> np.ndarray:
    array = np.asarray(value, dtype=float).reshape(-1)
    if array.shape != (2,):
        raise ManufacturedCaseError(f"Parameter '{name}' must be a 2-vector")
    return array


def _log_sources(constant: float, sources: list[tuple[np.ndarray, float]]) -> _HarmonicField:
    def value(points: np.ndarray) -> np.ndarray:
        total = np.full(points.shape[0], constant)
        for center, strength in sources:
            total += strength * np.log(np.hypot(*(points - center).T))
        return total

    def gradient(points: np.ndarray) -> np.ndarray:
        total = np.zeros_like(points)
        for center, strength in sources:
            rel = points - center
            total += strength * rel / (rel**2).sum(axis=1)[:, None]
        return total

    return _HarmonicField(value, gradient, tuple(tuple(c) for c, _ in sources))


def _log_radial(params: dict[str, Any], domain: Domain) -> _HarmonicField:
    if "center" in params:
        center = _point(params["center"], "center")
    elif domain.m:
        center = domain.holes[0].inner_point()
    else:
        raise ManufacturedCaseError("log-radial needs 'center' on a domain without holes")
    return _log_sources(float(params.get("a", 0.0)), [(center, float(params.get("b", 1.0)))])


def _point_log(params: dict[str, Any], domain: Domain) -> _HarmonicField:
    sources = params.get("sources")
    if not sources:
        raise ManufacturedCaseError("point-log needs a non-empty 'sources' list")
    parsed = [
        (_point(source["point"], "point"), float(source.get("strength", 1.0)))
        for source in sources
    ]
    return _log_sources(float(params.get("a", 0.0)), parsed)


def _harmonic_polynomial(params: dict[str, Any], domain: Domain) -> _HarmonicField:
    degree = int(params.get("k", 1))
    if degree < 0:
        raise ManufacturedCaseError(f"Polynomial degree must be non-negative, got {degree}")
    part = str(params.get("part", "re")).lower()
    if part not in ("re", "im"):
        raise ManufacturedCaseError(f"Polynomial part must be 're' or 'im', got {part}")
    scale = float(params.get("coefficient", 1.0))
    constant = float(params.get("constant", 0.0))
    origin = complex(*_point(params.get("center", (0.0, 0.0)), "center"))

    def complex_of(points: np.ndarray) -> np.ndarray:
        return points[:, 0] + 1j * points[:, 1] - origin

    def value(points: np.ndarray) -> np.ndarray:
        w = scale * complex_of(points) ** degree
        return constant + (w.real if part == "re" else w.imag)

    def gradient(points: np.ndarray) -> np.ndarray:
        if degree == 0:
            return np.zeros_like(points)
        dw = scale * degree * complex_of(points) ** (degree - 1)
        if part == "re":
            return np.column_stack((dw.real, -dw.imag))
        return np.column_stack((dw.imag, dw.real))

    return _HarmonicField(value, gradient)


MANUFACTURED_FIELDS: dict[str, Callable[[dict[str, Any], Domain], _HarmonicField]] = {
    "log-radial": _log_radial,
    "harmonic-polynomial": _harmonic_polynomial,
    "point-log": _point_log,
}


def manufactured_case(name: str, params: dict[str, Any] | None, domain: Domain) -> ManufacturedCase:
    builder = MANUFACTURED_FIELDS.get(name)
    if builder is None:
        raise ManufacturedCaseError(
            f"Unknown manufactured solution '{name}'. Available: {', '.join(MANUFACTURED_FIELDS)}"
        )
    params = dict(params or {})
    harmonic = builder(params, domain)
    for singular in harmonic.singularities:
        _require_outside(domain, np.asarray(singular))

    nodes = domain.points
    trace = harmonic.value(nodes)
    normal_derivative = np.einsum("ij,ij->i", harmonic.gradient(nodes), domain.normals)
    logger.info(f"Manufactured case {name} with params {params}")
    return ManufacturedCase(
        name=name,
        params=params,
        exact=lambda points: harmonic.value(np.atleast_2d(np.asarray(points, dtype=float))),
        trace=trace,
        normal_derivative=normal_derivative,
    )
