"""Robin, Neumann and Dirichlet solvers built on the layer operators.

Representations of the harmonic field u in the domain:

- Robin: u = D(S phi + c) + sum_j q_j S[chi_j] (c only on exceptional
  boundaries, hole charges q_j only when the domain has holes).
- Neumann: u = D psi + sum_j c_j S[chi_j] + offset, psi = S phi.
- Dirichlet: u = S[density] + constant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import OperatorError, SolverError
from .geometry import Domain
from .kernels import fund_solution
from .operators import (
    ArrayLike,
    BoundaryFunction,
    LayerOperators,
    TruncatedSVD,
    as_values,
    check_robin_coefficient,
)

logger = logging.getLogger(__name__)

EXCEPTIONAL_TOL = 1e-8
SVD_RCOND = 1e-8
FLUX_TOL = 1e-10
CONDITION_CAP = 1e12
EIGEN_GAP = 1e-3
CONSTANCY_LIMIT = 1e-6
MATCHING_CONDITION_CAP = 1e10


@dataclass(frozen=True, eq=False)
class ExceptionalReport:
    robin_constant: float
    equilibrium_density: np.ndarray
    is_exceptional: bool
    tolerance: float = EXCEPTIONAL_TOL


@dataclass(frozen=True, eq=False)
class RobinSolution:
    domain: Domain
    phi: BoundaryFunction
    c: float
    psi: BoundaryFunction
    exceptional: bool
    path: str
    charges: np.ndarray = field(default_factory=lambda: np.zeros(0))
    residual: float = 0.0
    condition_number: float = float("nan")
    side_condition: float = 0.0


@dataclass(frozen=True, eq=False)
class NeumannSolution:
    """Neumann field; ``charges[j - 1]`` multiplies S[chi_j] for hole j."""

    domain: Domain
    phi: BoundaryFunction
    psi: BoundaryFunction
    charges: np.ndarray
    offset: float
    path: str
    kernel_dimension: int
    corrected_data: BoundaryFunction
    normalization: str = "zero-mean-outer"


@dataclass(frozen=True, eq=False)
class DirichletSolution:
    domain: Domain
    phi: BoundaryFunction
    density: BoundaryFunction
    constant: float
    component_constants: np.ndarray
    gammas: np.ndarray
    exceptional: bool
    residual: float
    constancy_std: float
    trace_error: float


def _operators(domain: Domain, operators: LayerOperators | None) -> LayerOperators:
    if operators is None:
        return LayerOperators(domain)
    if operators.domain.domain_id != domain.domain_id:
        raise SolverError("Operators were assembled on another domain")
    return operators


def _flux_scale(domain: Domain, data: np.ndarray) -> float:
    return max(1.0, float(domain.weights @ np.abs(data)))


def detect_exceptional(
    domain: Domain,
    tol: float = EXCEPTIONAL_TOL,
    operators: LayerOperators | None = None,
) -> ExceptionalReport:
    """Robin constant of the outer curve from S0 phi - r = 0, w0 . phi = 1."""
    ops = _operators(domain, operators)
    outer = domain.slices[0]
    n0 = domain.outer.n_nodes
    system = np.zeros((n0 + 1, n0 + 1))
    system[:n0, :n0] = ops.S.matrix[outer, outer]
    system[:n0, n0] = -1.0
    system[n0, :n0] = domain.outer.weights
    rhs = np.zeros(n0 + 1)
    rhs[n0] = 1.0
    try:
        solution = scipy.linalg.solve(system, rhs)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"Equilibrium system is singular: {e}") from e
    if not np.all(np.isfinite(solution)):
        raise SolverError("Equilibrium system is singular")

    robin_constant = float(solution[n0])
    report = ExceptionalReport(
        robin_constant=robin_constant,
        equilibrium_density=solution[:n0],
        is_exceptional=abs(robin_constant) < tol,
        tolerance=tol,
    )
    logger.info(
        f"Robin constant of outer curve: {robin_constant:.12g} "
        f"(exceptional={report.is_exceptional})"
    )
    return report


def _exceptional_report(
    domain: Domain, tol: float, ops: LayerOperators, report: ExceptionalReport | None
) -> ExceptionalReport:
    if report is None:
        return detect_exceptional(domain, tol, ops)
    if report.equilibrium_density.shape != (domain.outer.n_nodes,):
        raise SolverError(
            f"Exceptional report has {report.equilibrium_density.shape[0]} outer nodes, "
            f"domain {domain.domain_id} has {domain.outer.n_nodes}"
        )
    return report


def _flux_free_solve(
    ops: LayerOperators, data: np.ndarray, rcond: float
) -> tuple[np.ndarray, TruncatedSVD]:
    svd = TruncatedSVD(ops.reduced.matrix, rcond=rcond)
    expected = ops.domain.m + 1
    if svd.nullity != expected:
        raise SolverError(
            f"Numerical kernel of -1/4 I + K^2 has dimension {svd.nullity}, expected {expected}"
        )
    phi = svd.lstsq(data)
    residual = float(np.max(np.abs(ops.reduced.matrix @ phi - data), initial=0.0))
    logger.info(f"Flux-free solve: kernel dimension {svd.nullity}, residual {residual:.3e}")
    return phi, svd


def solve_robin(
    domain: Domain,
    h: ArrayLike,
    g: ArrayLike,
    neumann: bool = False,
    tol: float = EXCEPTIONAL_TOL,
    condition_cap: float = CONDITION_CAP,
    rcond: float = SVD_RCOND,
    flux_tol: float = FLUX_TOL,
    operators: LayerOperators | None = None,
    exceptional_report: ExceptionalReport | None = None,
) -> RobinSolution:
    ops = _operators(domain, operators)
    try:
        h_values = check_robin_coefficient(domain, h, neumann, error=SolverError)
        g_values = as_values(domain, g)
    except OperatorError as e:
        raise SolverError(str(e)) from e

    if not np.any(h_values):
        fluxes = ops.quadrature.component_integrals(g_values)
        if np.any(np.abs(fluxes) > flux_tol * _flux_scale(domain, g_values)):
            raise SolverError(
                f"Robin data with h = 0 must be flux free on every component, got {fluxes}"
            )
        phi, _ = _flux_free_solve(ops, g_values, rcond)
        logger.info("Robin solve with h = 0 reduced to the Neumann strict path")
        return RobinSolution(
            domain=domain,
            phi=BoundaryFunction.on(domain, phi),
            c=0.0,
            psi=BoundaryFunction.on(domain, ops.S @ phi),
            exceptional=False,
            path="neumann",
            charges=np.zeros(domain.m),
        )

    report = _exceptional_report(domain, tol, ops, exceptional_report)
    n, m = domain.n_nodes, domain.m
    exceptional = report.is_exceptional
    size = n + int(exceptional) + m
    system = np.zeros((size, size))
    system[:n, :n] = ops.H(h_values).matrix - 0.25 * np.eye(n)
    rhs = np.zeros(size)
    rhs[:n] = g_values

    row = n
    if exceptional:
        system[:n, n] = h_values
        system[n, :n] = ops.quadrature.weights / ops.quadrature.weights.max()
        row += 1
    for j in range(1, m + 1):
        chi = domain.indicator(j)
        column = ops.interior_normal_derivative_of_single_layer(chi)
        column += h_values * (ops.S @ chi)
        system[:n, row] = column
        side = ops.quadrature.restricted(j)
        system[row, :n] = side / side.max()
        row += 1

    condition_number = float(np.linalg.cond(system))
    logger.info(
        f"Robin system: size {size}, exceptional={exceptional}, holes={m}, "
        f"condition {condition_number:.3e}"
    )
    if not np.isfinite(condition_number) or condition_number > condition_cap:
        raise SolverError(
            f"Robin system condition number {condition_number:.3e} exceeds cap {condition_cap:.1e}"
        )

    unknowns = scipy.linalg.lu_solve(scipy.linalg.lu_factor(system), rhs)
    residual = float(
        np.linalg.norm(system @ unknowns - rhs) / max(np.linalg.norm(rhs), 1.0)
    )
    phi = unknowns[:n]
    c = float(unknowns[n]) if exceptional else 0.0
    charges = unknowns[n + int(exceptional) :]
    side_condition = abs(ops.quadrature(phi)) if exceptional else 0.0
    if residual > 1e-10:
        logger.warning(f"Robin system residual {residual:.3e} above 1e-10")

    return RobinSolution(
        domain=domain,
        phi=BoundaryFunction.on(domain, phi),
        c=c,
        psi=BoundaryFunction.on(domain, ops.S @ phi + c),
        exceptional=exceptional,
        path="exceptional" if exceptional else "regular",
        charges=np.array(charges, dtype=float),
        residual=residual,
        condition_number=condition_number,
        side_condition=float(side_condition),
    )


def solve_neumann(
    domain: Domain,
    g: ArrayLike,
    rcond: float = SVD_RCOND,
    flux_tol: float = FLUX_TOL,
    operators: LayerOperators | None = None,
) -> NeumannSolution:
    ops = _operators(domain, operators)
    data = as_values(domain, g)
    scale = _flux_scale(domain, data)
    total = ops.quadrature(data)
    if abs(total) > flux_tol * scale:
        raise SolverError(f"Neumann data has nonzero total flux {total:.3e}; no solution exists")

    fluxes = ops.quadrature.component_integrals(data)
    charges = np.zeros(domain.m)
    corrected = data
    path = "strict"
    if np.any(np.abs(fluxes) > flux_tol * scale):
        path = "general"
        measures = ops.quadrature.measures
        corrected = data.copy()
        for j in range(1, domain.m + 1):
            charges[j - 1] = -fluxes[j] / measures[j]
            chi = domain.indicator(j)
            corrected -= charges[j - 1] * ops.interior_normal_derivative_of_single_layer(chi)
        remaining = ops.quadrature.component_integrals(corrected)
        if np.any(np.abs(remaining) > flux_tol * scale):
            raise SolverError(f"Charge correction left component fluxes {remaining}")
        logger.info(f"Neumann general path with charges {charges}")

    phi, svd = _flux_free_solve(ops, corrected, rcond)
    psi = ops.S @ phi

    outer = domain.slices[0]
    trace = ops.interior_trace_of_double_layer(psi)
    for j in range(1, domain.m + 1):
        trace += charges[j - 1] * (ops.S @ domain.indicator(j))
    w0 = domain.outer.weights
    offset = -float(w0 @ trace[outer]) / float(w0.sum())

    return NeumannSolution(
        domain=domain,
        phi=BoundaryFunction.on(domain, phi),
        psi=BoundaryFunction.on(domain, psi),
        charges=charges,
        offset=offset,
        path=path,
        kernel_dimension=svd.nullity,
        corrected_data=BoundaryFunction.on(domain, corrected),
    )


def eigenspace_V(
    domain: Domain,
    tol: float = 1e-8,
    operators: LayerOperators | None = None,
) -> list[BoundaryFunction]:
    """Null vectors of 1/2 I + K; there must be exactly one per hole."""
    ops = _operators(domain, operators)
    _, singular, vh = scipy.linalg.svd(ops.K.shifted(0.5).matrix, lapack_driver="gesdd")
    small = int(np.sum(singular < tol))
    if small != domain.m:
        raise SolverError(
            f"Eigenspace of 1/2 I + K has numerical dimension {small}, expected {domain.m}"
        )
    if small < singular.shape[0] and singular[-small - 1] <= EIGEN_GAP:
        raise SolverError(
            f"No spectral gap above the eigenspace: next singular value {singular[-small - 1]:.3e}"
        )
    if small == 0:
        return []
    return [BoundaryFunction.on(domain, row) for row in vh[-small:]]


def _single_layer_at(domain: Domain, density: np.ndarray, point: np.ndarray) -> float:
    kernel = fund_solution(np.asarray(point, dtype=float)[None, :], domain.points)
    return float(kernel @ (domain.weights * density))


def psi_basis(
    domain: Domain,
    operators: LayerOperators | None = None,
    tol: float = 1e-8,
) -> list[BoundaryFunction]:
    """Densities Psi_h in the eigenspace with S Psi_h = delta_hk on hole k."""
    if domain.m == 0:
        return []
    ops = _operators(domain, operators)
    basis = np.column_stack([v.values for v in eigenspace_V(domain, tol, ops)])
    centers = domain.hole_centers()
    matching = np.array(
        [[_single_layer_at(domain, basis[:, h], center) for h in range(domain.m)] for center in centers]
    )
    condition = np.linalg.cond(matching)
    if not np.isfinite(condition) or condition > MATCHING_CONDITION_CAP:
        raise SolverError(f"Hole matching matrix is ill-conditioned ({condition:.3e})")
    psi = basis @ np.linalg.inv(matching)

    single = ops.S.matrix @ psi
    for k in range(1, domain.m + 1):
        part = domain.slices[k]
        w = domain.weights[part]
        averages = w @ single[part] / w.sum()
        expected = np.eye(domain.m)[k - 1]
        if np.max(np.abs(averages - expected)) > 1e-6:
            logger.warning(f"Psi basis hole-{k} averages {averages} differ from {expected}")
    return [BoundaryFunction.on(domain, psi[:, h]) for h in range(domain.m)]


def solve_dirichlet(
    domain: Domain,
    f: ArrayLike,
    tol: float = EXCEPTIONAL_TOL,
    rcond: float = SVD_RCOND,
    operators: LayerOperators | None = None,
    exceptional_report: ExceptionalReport | None = None,
) -> DirichletSolution:
    ops = _operators(domain, operators)
    data = as_values(domain, f)
    report = _exceptional_report(domain, tol, ops, exceptional_report)

    df = ops.T @ data
    svd = TruncatedSVD(ops.reduced.matrix, rcond=rcond)
    phi = svd.lstsq(ops.Jprime @ df)
    residual = float(np.max(np.abs(ops.J @ phi - df)))
    if residual > 1e-8:
        logger.warning(f"Dirichlet residual |J phi - df| = {residual:.3e} above 1e-8")

    gap = ops.S @ phi - data
    constants = np.zeros(domain.m + 1)
    spreads = np.zeros(domain.m + 1)
    for j, part in enumerate(domain.slices):
        w = domain.weights[part]
        constants[j] = float(w @ gap[part] / w.sum())
        spreads[j] = float(np.sqrt(w @ (gap[part] - constants[j]) ** 2 / w.sum()))
    constancy_std = float(spreads.max())
    if constancy_std > CONSTANCY_LIMIT:
        raise SolverError(
            f"S phi - f is not constant per component (std {constancy_std:.3e})"
        )

    gammas = np.empty(domain.m + 1)
    gammas[0] = -constants[0]
    gammas[1:] = constants[0] - constants[1:]
    density = phi.copy()
    for h, psi in enumerate(psi_basis(domain, ops, tol=1e-8), start=1):
        density += gammas[h] * psi.values

    constant = gammas[0]
    if not report.is_exceptional:
        density[domain.slices[0]] += (gammas[0] / report.robin_constant) * report.equilibrium_density
        constant = 0.0

    trace_error = float(np.max(np.abs(ops.S @ density + constant - data)))
    logger.info(
        f"Dirichlet solve: residual {residual:.3e}, constancy std {constancy_std:.3e}, "
        f"trace error {trace_error:.3e}"
    )
    return DirichletSolution(
        domain=domain,
        phi=BoundaryFunction.on(domain, phi),
        density=BoundaryFunction.on(domain, density),
        constant=float(constant),
        component_constants=constants,
        gammas=gammas,
        exceptional=report.is_exceptional,
        residual=residual,
        constancy_std=constancy_std,
        trace_error=trace_error,
    )
