"""Dense Nystrom discretizations of the boundary operators.

Conventions on a domain with nodes x_i, outward normals nu_i and trapezoid
weights w_i:

- ``S``: single layer trace, (S phi)_i ~ int phi(y) s(x_i, y) dsigma_y.
- ``D_pv``: principal value of the double layer; interior trace is 1/2 + D_pv.
- ``K``: adjoint double layer; interior normal derivative of S phi is
  (-1/2 + K) phi.
- ``T``: tangential derivative d/ds, block diagonal over components.
- ``J = J' = T S`` and ``H = K^2 + diag(h) (1/2 S + D_pv S)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
import scipy.linalg

from .errors import OperatorError
from .geometry import CurveComponent, Domain
from .kernels import dnu_y_s, double_layer_diagonal, fund_solution

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, "BoundaryFunction"]


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Nodal values on every boundary component of one domain."""

    values: np.ndarray
    domain_id: str
    offsets: tuple[int, ...]

    @classmethod
    def on(cls, domain: Domain, values: ArrayLike) -> "BoundaryFunction":
        if isinstance(values, BoundaryFunction):
            if values.domain_id != domain.domain_id:
                raise OperatorError("Boundary function belongs to another domain")
            return values
        array = np.asarray(values, dtype=float).reshape(-1)
        if array.shape[0] != domain.n_nodes:
            raise OperatorError(
                f"Boundary function has {array.shape[0]} values, domain has {domain.n_nodes} nodes"
            )
        if not np.all(np.isfinite(array)):
            raise OperatorError("Boundary function has non-finite values")
        return cls(array, domain.domain_id, tuple(int(o) for o in domain.offsets))

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def component(self, j: int) -> np.ndarray:
        return self.values[self.offsets[j] : self.offsets[j + 1]]


def as_values(domain: Domain, values: ArrayLike) -> np.ndarray:
    return BoundaryFunction.on(domain, values).values


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """Dense square matrix tagged with the domain it was assembled on."""

    name: str
    matrix: np.ndarray
    domain_id: str

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise OperatorError(f"Operator {self.name} is not square")
        if not np.all(np.isfinite(self.matrix)):
            raise OperatorError(f"Operator {self.name} has non-finite entries")

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    def _check_partner(self, other: "DiscreteOperator") -> None:
        if other.domain_id != self.domain_id:
            raise OperatorError(
                f"Cannot combine {self.name} and {other.name}: different domains"
            )

    def __matmul__(self, other):
        if isinstance(other, DiscreteOperator):
            self._check_partner(other)
            return DiscreteOperator(
                f"{self.name}*{other.name}", self.matrix @ other.matrix, self.domain_id
            )
        if isinstance(other, BoundaryFunction):
            if other.domain_id != self.domain_id:
                raise OperatorError(f"Operator {self.name} applied to a foreign function")
            return BoundaryFunction(self.matrix @ other.values, self.domain_id, other.offsets)
        vector = np.asarray(other, dtype=float)
        if vector.shape[0] != self.size:
            raise OperatorError(
                f"Operator {self.name} of size {self.size} applied to length {vector.shape[0]}"
            )
        return self.matrix @ vector

    def __add__(self, other: "DiscreteOperator") -> "DiscreteOperator":
        self._check_partner(other)
        return DiscreteOperator(
            f"({self.name}+{other.name})", self.matrix + other.matrix, self.domain_id
        )

    def __sub__(self, other: "DiscreteOperator") -> "DiscreteOperator":
        self._check_partner(other)
        return DiscreteOperator(
            f"({self.name}-{other.name})", self.matrix - other.matrix, self.domain_id
        )

    def __rmul__(self, scalar: float) -> "DiscreteOperator":
        return DiscreteOperator(
            f"{scalar:g}{self.name}", float(scalar) * self.matrix, self.domain_id
        )

    def shifted(self, alpha: float) -> "DiscreteOperator":
        """alpha * I + self."""
        return DiscreteOperator(
            f"({alpha:g}I+{self.name})",
            self.matrix + alpha * np.eye(self.size),
            self.domain_id,
        )

    def row_scaled(self, factors: np.ndarray, name: str) -> "DiscreteOperator":
        return DiscreteOperator(
            name, np.asarray(factors, dtype=float)[:, None] * self.matrix, self.domain_id
        )


@dataclass(frozen=True, eq=False)
class QuadratureFunctional:
    """Row vector of trapezoid weights realizing the boundary integral."""

    weights: np.ndarray
    domain_id: str
    slices: tuple[slice, ...]

    def __call__(self, values: ArrayLike) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))

    def restricted(self, j: int) -> np.ndarray:
        row = np.zeros_like(self.weights)
        row[self.slices[j]] = self.weights[self.slices[j]]
        return row

    def component_integrals(self, values: ArrayLike) -> np.ndarray:
        array = np.asarray(values, dtype=float)
        return np.array(
            [self.weights[part] @ array[part] for part in self.slices]
        )

    @property
    def measures(self) -> np.ndarray:
        return np.array([self.weights[part].sum() for part in self.slices])


def quadrature_functional(domain: Domain) -> QuadratureFunctional:
    return QuadratureFunctional(domain.weights.copy(), domain.domain_id, domain.slices)


def kress_log_weights(n_nodes: int) -> np.ndarray:
    """Circulant matrix R with sum_j R_ij f(t_j) ~ int log(4 sin^2((t_i - t)/2)) f(t) dt."""
    n = n_nodes // 2
    k = np.arange(n_nodes)
    modes = np.arange(1, n)
    series = (np.cos(np.outer(k, modes) * np.pi / n) / modes).sum(axis=1)
    first_column = -(2.0 * np.pi / n) * series - (np.pi / n**2) * (-1.0) ** k
    return scipy.linalg.circulant(first_column)


def _single_layer_self_block(curve: CurveComponent) -> np.ndarray:
    n_nodes = curve.n_nodes
    diff = curve.points[:, None, :] - curve.points[None, :, :]
    dist2 = (diff**2).sum(axis=-1)
    dt = curve.t[:, None] - curve.t[None, :]
    log_sin = np.log(4.0 * np.sin(dt / 2.0) ** 2 + np.eye(n_nodes))
    np.fill_diagonal(dist2, 1.0)
    smooth = (np.log(dist2) - log_sin) / (4.0 * np.pi)
    np.fill_diagonal(smooth, np.log(curve.speed) / (2.0 * np.pi))
    singular = kress_log_weights(n_nodes) * curve.speed[None, :] / (4.0 * np.pi)
    return singular + smooth * curve.weights[None, :]


def assemble_single_layer(domain: Domain) -> DiscreteOperator:
    """Single layer with log-split quadrature on self blocks, trapezoid elsewhere."""
    matrix = np.empty((domain.n_nodes, domain.n_nodes))
    for a, target in zip(domain.slices, domain.components):
        for b, source in zip(domain.slices, domain.components):
            if a == b:
                matrix[a, b] = _single_layer_self_block(target)
            else:
                kernel = fund_solution(target.points[:, None, :], source.points[None, :, :])
                matrix[a, b] = kernel * source.weights[None, :]
    return DiscreteOperator("S", matrix, domain.domain_id)


def _offdiagonal_sources(points: np.ndarray) -> np.ndarray:
    """Source array with each diagonal source moved off its target."""
    sources = np.broadcast_to(points[None, :, :], (points.shape[0],) * 2 + (2,)).copy()
    index = np.arange(points.shape[0])
    sources[index, index] = points + np.array([1.0, 0.0])
    return sources


def assemble_double_layer_pv(domain: Domain) -> DiscreteOperator:
    points = domain.points
    kernel = dnu_y_s(
        points[:, None, :], _offdiagonal_sources(points), domain.normals[None, :, :]
    )
    np.fill_diagonal(kernel, double_layer_diagonal(domain.curvature))
    return DiscreteOperator("D", kernel * domain.weights[None, :], domain.domain_id)


def assemble_adjoint_double_layer(
    domain: Domain, double_layer: DiscreteOperator | None = None
) -> DiscreteOperator:
    """K = W^-1 D_pv^T W."""
    if double_layer is None:
        double_layer = assemble_double_layer_pv(domain)
    elif double_layer.domain_id != domain.domain_id:
        raise OperatorError("Double layer was assembled on another domain")
    w = domain.weights
    matrix = double_layer.matrix.T * w[None, :] / w[:, None]
    return DiscreteOperator("K", matrix, domain.domain_id)


def fourier_differentiation_matrix(n_nodes: int) -> np.ndarray:
    step = 2.0 * np.pi / n_nodes
    k = np.arange(1, n_nodes)
    column = np.zeros(n_nodes)
    column[1:] = 0.5 * (-1.0) ** k / np.tan(k * step / 2.0)
    return scipy.linalg.circulant(column)


def assemble_tangential_derivative(domain: Domain) -> DiscreteOperator:
    """d/ds along tau = (-nu2, nu1) on every component."""
    blocks = [
        c.tangent_sign * fourier_differentiation_matrix(c.n_nodes) / c.speed[:, None]
        for c in domain.components
    ]
    return DiscreteOperator("d/ds", scipy.linalg.block_diag(*blocks), domain.domain_id)


def assemble_J(domain: Domain, operators: "LayerOperators | None" = None) -> DiscreteOperator:
    ops = operators or LayerOperators(domain)
    return DiscreteOperator("J", (ops.T @ ops.S).matrix, domain.domain_id)


def assemble_Jprime(
    domain: Domain, operators: "LayerOperators | None" = None
) -> DiscreteOperator:
    ops = operators or LayerOperators(domain)
    return DiscreteOperator("J'", (ops.T @ ops.S).matrix, domain.domain_id)


def check_robin_coefficient(
    domain: Domain,
    h: ArrayLike,
    neumann: bool = False,
    error: type[Exception] = OperatorError,
) -> np.ndarray:
    """Validate h >= 0 with positive integral, or h == 0 when the Neumann flag is set."""
    values = as_values(domain, h)
    if np.any(values < 0):
        raise error(f"Robin coefficient is negative at node {int(values.argmin())}")
    integral = float(domain.weights @ values)
    if integral <= 0:
        if not (neumann and not np.any(values)):
            raise error(
                "Robin coefficient vanishes identically; pass the Neumann flag for h = 0"
            )
    return values


def assemble_H(
    domain: Domain,
    h: ArrayLike,
    neumann: bool = False,
    operators: "LayerOperators | None" = None,
) -> DiscreteOperator:
    values = check_robin_coefficient(domain, h, neumann)
    ops = operators or LayerOperators(domain)
    K2 = ops.K @ ops.K
    if not np.any(values):
        return DiscreteOperator("H", K2.matrix, domain.domain_id)
    trace_of_double_layer = 0.5 * ops.S.matrix + ops.D.matrix @ ops.S.matrix
    matrix = K2.matrix + values[:, None] * trace_of_double_layer
    return DiscreteOperator("H", matrix, domain.domain_id)


class LayerOperators:
    """Lazily assembled operator bundle shared by the solvers of one domain."""

    def __init__(self, domain: Domain):
        self.domain = domain

    @cached_property
    def S(self) -> DiscreteOperator:
        logger.info(f"Assembling single layer on {self.domain.domain_id} (N={self.domain.n_nodes})")
        return assemble_single_layer(self.domain)

    @cached_property
    def D(self) -> DiscreteOperator:
        return assemble_double_layer_pv(self.domain)

    @cached_property
    def K(self) -> DiscreteOperator:
        return assemble_adjoint_double_layer(self.domain, self.D)

    @cached_property
    def T(self) -> DiscreteOperator:
        return assemble_tangential_derivative(self.domain)

    @cached_property
    def J(self) -> DiscreteOperator:
        return assemble_J(self.domain, self)

    @cached_property
    def Jprime(self) -> DiscreteOperator:
        return assemble_Jprime(self.domain, self)

    @cached_property
    def reduced(self) -> DiscreteOperator:
        """-1/4 I + K^2, the Fredholm form of J'J."""
        return (self.K @ self.K).shifted(-0.25)

    @cached_property
    def quadrature(self) -> QuadratureFunctional:
        return quadrature_functional(self.domain)

    def H(self, h: ArrayLike, neumann: bool = False) -> DiscreteOperator:
        return assemble_H(self.domain, h, neumann, operators=self)

    def interior_normal_derivative_of_single_layer(self, density: np.ndarray) -> np.ndarray:
        return -0.5 * density + self.K.matrix @ density

    def interior_trace_of_double_layer(self, density: np.ndarray) -> np.ndarray:
        return 0.5 * density + self.D.matrix @ density


class TruncatedSVD:
    """Thin SVD with rank-cutoff least squares, condition number and numerical rank."""

    def __init__(self, matrix: np.ndarray, rcond: float = 1e-8):
        self.matrix = matrix
        self.rcond = rcond
        self.U, self.s, self.Vh = scipy.linalg.svd(
            matrix, full_matrices=False, lapack_driver="gesdd"
        )
        self.cond = np.inf if self.s[-1] < 1e-300 else float(self.s[0] / self.s[-1])

    @property
    def keep(self) -> np.ndarray:
        return self.s >= self.rcond * self.s[0]

    @property
    def rank(self) -> int:
        return int(self.keep.sum())

    @property
    def nullity(self) -> int:
        return int(self.s.shape[0] - self.rank)

    def null_vectors(self) -> np.ndarray:
        return self.Vh[~self.keep].T

    def lstsq(self, rhs: np.ndarray) -> np.ndarray:
        keep = self.keep
        coeffs = (self.U[:, keep].T @ rhs) / self.s[keep]
        return self.Vh[keep].T @ coeffs
