"""Multiply connected planar domains sampled on equispaced parameter grids.

Every boundary component is a closed curve x(t), t in [0, 2*pi), sampled at an
even number of nodes t_j = 2*pi*j/N. Quadrature on a component is the periodic
trapezoidal rule with weights (2*pi/N) * |x'(t_j)|.

Normals always point out of the domain: away from the enclosed region on the
outer curve, into the hole on every hole curve.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Sequence

import numpy as np

from .errors import GeometryError

logger = logging.getLogger(__name__)

Role = Literal["outer", "hole"]

MIN_NODES = 16
SEPARATION_FACTOR = 1e-6
ORTHOGONALITY_TOL = 1e-12
WINDING_RESIDUAL_TOL = 0.1


@dataclass(frozen=True)
class CurveSpec:
    """Resolution-independent recipe for a boundary curve."""

    kind: Literal["circle", "fourier"]
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0
    x_cos: tuple[float, ...] = ()
    x_sin: tuple[float, ...] = ()
    y_cos: tuple[float, ...] = ()
    y_sin: tuple[float, ...] = ()

    def sample(self, n_nodes: int, role: Role) -> "CurveComponent":
        if self.kind == "circle":
            return make_circle(self.center, self.radius, n_nodes, role)
        return make_fourier_curve(
            self.x_cos, self.x_sin, self.y_cos, self.y_sin, n_nodes, role
        )

    def evaluate(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Points, first and second parameter derivatives at arbitrary t."""
        t = np.asarray(t, dtype=float)
        if self.kind == "circle":
            cos_t, sin_t = np.cos(t), np.sin(t)
            points = np.column_stack(
                (self.center[0] + self.radius * cos_t, self.center[1] + self.radius * sin_t)
            )
            velocity = self.radius * np.column_stack((-sin_t, cos_t))
            return points, velocity, -self.radius * np.column_stack((cos_t, sin_t))
        x, dx, ddx = _trig_series(self.x_cos, self.x_sin, t)
        y, dy, ddy = _trig_series(self.y_cos, self.y_sin, t)
        return (
            np.column_stack((x, y)),
            np.column_stack((dx, dy)),
            np.column_stack((ddx, ddy)),
        )


@dataclass(frozen=True, eq=False)
class CurveComponent:
    """One closed boundary curve with its quadrature data."""

    role: Role
    t: np.ndarray
    points: np.ndarray
    velocity: np.ndarray
    speed: np.ndarray
    normal: np.ndarray
    curvature: np.ndarray
    spec: CurveSpec

    @property
    def n_nodes(self) -> int:
        return int(self.t.shape[0])

    @cached_property
    def weights(self) -> np.ndarray:
        return (2.0 * np.pi / self.n_nodes) * self.speed

    @cached_property
    def diameter(self) -> float:
        diffs = self.points[:, None, :] - self.points[None, :, :]
        return float(np.sqrt((diffs**2).sum(axis=-1)).max())

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)

    @cached_property
    def orientation(self) -> int:
        """+1 for a counter-clockwise parametrization, -1 otherwise."""
        return 1 if _signed_area(self.points) > 0 else -1

    @property
    def tangent_sign(self) -> int:
        """+1 when increasing t runs along tau = (-nu2, nu1), -1 otherwise."""
        return self.orientation * (1 if self.role == "outer" else -1)

    def inner_point(self) -> np.ndarray:
        """A point enclosed by the curve, for matching conditions inside a hole."""
        try:
            if winding_number(self, self.centroid) != 0:
                return self.centroid
        except GeometryError:
            pass
        inward = self.normal if self.role == "hole" else -self.normal
        candidates = np.concatenate(
            [self.points + f * self.diameter * inward for f in (0.05, 0.1, 0.2, 0.3)]
        )
        enclosed = candidates[np.abs(_winding_values(self.points, candidates)) > 0.5]
        if enclosed.shape[0] == 0:
            raise GeometryError("Could not find a point enclosed by the curve")
        clearance = np.sqrt(
            ((enclosed[:, None, :] - self.points[None, :, :]) ** 2).sum(axis=-1)
        ).min(axis=1)
        return enclosed[int(clearance.argmax())]

    def refine(self, multiplier: int) -> "CurveComponent":
        return self.spec.sample(self.n_nodes * multiplier, self.role)


def _signed_area(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _parameter_grid(n_nodes: int) -> np.ndarray:
    if n_nodes % 2 or n_nodes < MIN_NODES:
        raise GeometryError(
            f"Node count must be even and at least {MIN_NODES}, got {n_nodes}"
        )
    return 2.0 * np.pi * np.arange(n_nodes) / n_nodes


def _build_component(
    role: Role,
    t: np.ndarray,
    points: np.ndarray,
    velocity: np.ndarray,
    acceleration: np.ndarray,
    spec: CurveSpec,
) -> CurveComponent:
    if role not in ("outer", "hole"):
        raise GeometryError(f"Unknown curve role: {role}")

    speed = np.hypot(velocity[:, 0], velocity[:, 1])
    if speed.min() <= 1e-12 * max(speed.max(), 1.0):
        raise GeometryError(
            f"Degenerate curve: zero speed at node {int(speed.argmin())}"
        )

    orientation = 1.0 if _signed_area(points) > 0 else -1.0
    # (x2', -x1') points away from the enclosed region for a counter-clockwise curve
    enclosed_outward = orientation * np.column_stack(
        (velocity[:, 1], -velocity[:, 0])
    ) / speed[:, None]
    normal = enclosed_outward if role == "outer" else -enclosed_outward
    curvature = -np.einsum("ij,ij->i", acceleration, normal) / speed**2

    component = CurveComponent(
        role=role,
        t=t,
        points=points,
        velocity=velocity,
        speed=speed,
        normal=normal,
        curvature=curvature,
        spec=spec,
    )
    _validate_component(component)
    return component


def _validate_component(component: CurveComponent) -> None:
    normal_norm = np.hypot(component.normal[:, 0], component.normal[:, 1])
    if np.max(np.abs(normal_norm - 1.0)) > ORTHOGONALITY_TOL:
        raise GeometryError("Normals are not unit vectors")
    tangency = np.einsum("ij,ij->i", component.normal, component.velocity)
    if np.max(np.abs(tangency)) > ORTHOGONALITY_TOL * component.speed.max():
        raise GeometryError("Normals are not orthogonal to the curve velocity")
    _check_simple(component.points, SEPARATION_FACTOR * component.diameter)


def _check_simple(points: np.ndarray, threshold: float) -> None:
    n = points.shape[0]
    ends = np.roll(points, -1, axis=0)
    index = np.arange(n)
    for i in range(n):
        gap = np.abs(index - i)
        far = np.minimum(gap, n - gap) >= 2
        dist = np.hypot(*(points[far] - points[i]).T)
        if dist.size and dist.min() <= threshold:
            raise GeometryError(f"Self-intersection detected near node {i}")
        a0, a1 = points[i], ends[i]
        b0, b1 = points[far], ends[far]
        if _segments_cross(a0, a1, b0, b1).any():
            raise GeometryError(f"Self-intersection detected near node {i}")


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _segments_cross(
    a0: np.ndarray, a1: np.ndarray, b0: np.ndarray, b1: np.ndarray
) -> np.ndarray:
    d1 = _cross(a1 - a0, b0 - a0)
    d2 = _cross(a1 - a0, b1 - a0)
    d3 = _cross(b1 - b0, a0 - b0)
    d4 = _cross(b1 - b0, a1 - b0)
    return (d1 * d2 < 0) & (d3 * d4 < 0)


def make_circle(
    center: Sequence[float], radius: float, n_nodes: int, role: Role = "outer"
) -> CurveComponent:
    """Counter-clockwise circle sampled at angles 2*pi*j/n_nodes."""
    if radius <= 0:
        raise GeometryError(f"Circle radius must be positive, got {radius}")
    t = _parameter_grid(n_nodes)
    spec = CurveSpec(
        kind="circle", center=(float(center[0]), float(center[1])), radius=float(radius)
    )
    return _build_component(role, t, *spec.evaluate(t), spec)


def _trig_series(
    cos_coeffs: Sequence[float], sin_coeffs: Sequence[float], t: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    value = np.zeros_like(t)
    first = np.zeros_like(t)
    second = np.zeros_like(t)
    for k, a_k in enumerate(cos_coeffs):
        value += a_k * np.cos(k * t)
        first -= k * a_k * np.sin(k * t)
        second -= k * k * a_k * np.cos(k * t)
    for k, b_k in enumerate(sin_coeffs):
        value += b_k * np.sin(k * t)
        first += k * b_k * np.cos(k * t)
        second -= k * k * b_k * np.sin(k * t)
    return value, first, second


def make_fourier_curve(
    x_cos: Sequence[float],
    x_sin: Sequence[float],
    y_cos: Sequence[float],
    y_sin: Sequence[float],
    n_nodes: int,
    role: Role = "outer",
) -> CurveComponent:
    """Curve given by trigonometric series for both coordinates.

    ``x_cos[k]`` multiplies cos(k t) in x1(t), ``x_sin[k]`` multiplies sin(k t),
    and likewise for x2(t). Index 0 of a cosine list is the constant term; index
    0 of a sine list is ignored.
    """
    t = _parameter_grid(n_nodes)
    spec = CurveSpec(
        kind="fourier",
        x_cos=tuple(float(c) for c in x_cos),
        x_sin=tuple(float(c) for c in x_sin),
        y_cos=tuple(float(c) for c in y_cos),
        y_sin=tuple(float(c) for c in y_sin),
    )
    return _build_component(role, t, *spec.evaluate(t), spec)


def make_kite(
    center: Sequence[float],
    scale: float,
    n_nodes: int,
    role: Role = "outer",
    indent: float = 0.65,
    stretch: float = 1.5,
) -> CurveComponent:
    """Kite x(t) = (cos t + a cos 2t - a, b sin t), scaled and shifted.

    The defaults a = 0.65, b = 1.5 give the classic kite; a smaller ``indent``
    gives a shallower dent.
    """
    cx, cy = float(center[0]), float(center[1])
    return make_fourier_curve(
        [cx - indent * scale, scale, indent * scale],
        [],
        [cy],
        [0.0, stretch * scale],
        n_nodes,
        role,
    )


def _winding_values(curve_points: np.ndarray, points: np.ndarray) -> np.ndarray:
    rel = curve_points[None, :, :] - points[:, None, :]
    angles = np.arctan2(rel[..., 1], rel[..., 0])
    steps = np.diff(np.concatenate((angles, angles[:, :1]), axis=1), axis=1)
    steps = (steps + np.pi) % (2.0 * np.pi) - np.pi
    return steps.sum(axis=1) / (2.0 * np.pi)


def winding_numbers(curve: CurveComponent, points: np.ndarray) -> np.ndarray:
    """Winding numbers of ``curve`` (as parametrized) around many points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dist = np.sqrt(
        ((curve.points[None, :, :] - pts[:, None, :]) ** 2).sum(axis=-1)
    ).min(axis=1)
    threshold = SEPARATION_FACTOR * curve.diameter
    if np.any(dist <= threshold):
        raise GeometryError("Point too close to curve for a winding number")
    raw = _winding_values(curve.points, pts)
    rounded = np.rint(raw)
    if np.any(np.abs(raw - rounded) >= WINDING_RESIDUAL_TOL):
        raise GeometryError("Winding number did not round to an integer")
    return rounded.astype(int)


def winding_number(curve: CurveComponent, point: Sequence[float]) -> int:
    """Winding number from the exact angle increments along the node polygon."""
    return int(winding_numbers(curve, np.asarray(point, dtype=float)[None, :])[0])


def boundary_measure(component: CurveComponent) -> float:
    return float(component.weights.sum())


@dataclass(frozen=True, eq=False)
class Domain:
    """Outer curve minus the closures of the holes."""

    outer: CurveComponent
    holes: tuple[CurveComponent, ...] = field(default_factory=tuple)

    @property
    def components(self) -> tuple[CurveComponent, ...]:
        return (self.outer, *self.holes)

    @property
    def m(self) -> int:
        return len(self.holes)

    @cached_property
    def offsets(self) -> np.ndarray:
        sizes = [c.n_nodes for c in self.components]
        return np.concatenate(([0], np.cumsum(sizes)))

    @property
    def n_nodes(self) -> int:
        return int(self.offsets[-1])

    @cached_property
    def slices(self) -> tuple[slice, ...]:
        return tuple(
            slice(int(self.offsets[j]), int(self.offsets[j + 1]))
            for j in range(len(self.components))
        )

    @cached_property
    def component_index(self) -> np.ndarray:
        return np.repeat(
            np.arange(len(self.components)), [c.n_nodes for c in self.components]
        )

    @cached_property
    def points(self) -> np.ndarray:
        return np.concatenate([c.points for c in self.components])

    @cached_property
    def normals(self) -> np.ndarray:
        return np.concatenate([c.normal for c in self.components])

    @cached_property
    def weights(self) -> np.ndarray:
        return np.concatenate([c.weights for c in self.components])

    @cached_property
    def curvature(self) -> np.ndarray:
        return np.concatenate([c.curvature for c in self.components])

    @cached_property
    def domain_id(self) -> str:
        digest = hashlib.sha1(np.ascontiguousarray(self.points).tobytes())
        return digest.hexdigest()[:12]

    def indicator(self, j: int) -> np.ndarray:
        chi = np.zeros(self.n_nodes)
        chi[self.slices[j]] = 1.0
        return chi

    def hole_centers(self) -> np.ndarray:
        return np.array([hole.inner_point() for hole in self.holes]).reshape(-1, 2)

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        inside = np.abs(winding_numbers(self.outer, pts)) == 1
        for hole in self.holes:
            inside &= winding_numbers(hole, pts) == 0
        return inside

    def distance_to_boundary(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        diffs = self.points[None, :, :] - pts[:, None, :]
        return np.sqrt((diffs**2).sum(axis=-1)).min(axis=1)

    def feature_size(self, j: int) -> float:
        component = self.components[j]
        size = component.diameter
        for k, other in enumerate(self.components):
            if k == j:
                continue
            diffs = component.points[:, None, :] - other.points[None, :, :]
            size = min(size, float(np.sqrt((diffs**2).sum(axis=-1)).min()))
        return size

    def interior_test_points(
        self, offset_fraction: float = 0.25, per_component: int = 16
    ) -> np.ndarray:
        """Points pushed into the domain along -normal from a subset of nodes."""
        probes = []
        for j, component in enumerate(self.components):
            offset = offset_fraction * self.feature_size(j)
            picks = np.linspace(
                0, component.n_nodes, per_component, endpoint=False
            ).astype(int)
            candidates = component.points[picks] - offset * component.normal[picks]
            keep = self.contains(candidates)
            keep &= self.distance_to_boundary(candidates) >= 0.5 * offset
            probes.append(candidates[keep])
        return np.concatenate(probes)


def build_domain(
    outer: CurveComponent, holes: Sequence[CurveComponent] = ()
) -> Domain:
    """Validate containment and disjointness and assemble the domain."""
    if outer.role != "outer":
        raise GeometryError("First component must have role 'outer'")
    holes = tuple(holes)
    for j, hole in enumerate(holes, start=1):
        if hole.role != "hole":
            raise GeometryError(f"Component {j} must have role 'hole'")

    for j, hole in enumerate(holes, start=1):
        if np.any(np.abs(_winding_values(outer.points, hole.points)) < 0.5):
            raise GeometryError(f"Hole {j} is not contained in the outer curve")
        if np.any(np.abs(_winding_values(hole.points, outer.points)) > 0.5):
            raise GeometryError(f"Hole {j} intersects the outer curve")
        _check_separated(outer, hole, f"Hole {j} touches the outer curve")

    for j, first in enumerate(holes, start=1):
        for k, second in enumerate(holes[j:], start=j + 1):
            overlap = np.any(np.abs(_winding_values(first.points, second.points)) > 0.5)
            overlap |= np.any(np.abs(_winding_values(second.points, first.points)) > 0.5)
            if overlap:
                raise GeometryError(f"Holes {j} and {k} overlap")
            _check_separated(first, second, f"Holes {j} and {k} touch")

    domain = Domain(outer=outer, holes=holes)
    logger.info(
        f"Built domain {domain.domain_id} with m={domain.m} holes and N={domain.n_nodes} nodes"
    )
    return domain


def _check_separated(first: CurveComponent, second: CurveComponent, message: str) -> None:
    diffs = first.points[:, None, :] - second.points[None, :, :]
    gap = float(np.sqrt((diffs**2).sum(axis=-1)).min())
    if gap <= SEPARATION_FACTOR * max(first.diameter, second.diameter):
        raise GeometryError(message)
