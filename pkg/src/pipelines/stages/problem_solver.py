from ..base import Stage, StageResult, CaseContext
from src.evaluate import boundary_residual_robin, energy_residual
from src.solvers import solve_dirichlet, solve_neumann, solve_robin
import logging

import numpy as np

logger = logging.getLogger(__name__)


class ProblemSolverStage(Stage):
    """Dispatch to the Robin, Neumann or Dirichlet solver and record diagnostics"""

    def _solve_robin(self, context: CaseContext) -> None:
        config = context.config
        tolerances = config.tolerances
        solution = solve_robin(
            context.domain,
            context.h,
            context.data,
            neumann=config.neumann_flag,
            tol=tolerances.exceptional,
            condition_cap=tolerances.condition_cap,
            rcond=tolerances.svd_rcond,
            flux_tol=tolerances.flux,
            operators=context.operators,
            exceptional_report=context.exceptional,
        )
        context.solution = solution
        context.diagnostics["path"] = solution.path
        context.diagnostics["condition_number"] = solution.condition_number
        context.diagnostics["c"] = solution.c
        context.diagnostics["charges"] = solution.charges.tolist()

        residual = boundary_residual_robin(
            context.domain, solution, context.h, context.data, context.operators
        )
        energy = energy_residual(
            context.domain, solution, context.h, context.data, context.operators
        )
        context.metrics["boundary_residual"] = residual
        context.metrics["energy_residual"] = energy
        context.record_check("boundary_residual", residual, tolerances.boundary_residual)
        context.record_check("energy_residual", energy, tolerances.energy)
        if solution.path != "neumann":
            context.metrics["system_residual"] = solution.residual
            context.record_check("system_residual", solution.residual, 1e-10)
        if solution.exceptional:
            context.metrics["side_condition"] = solution.side_condition
            context.record_check(
                "side_condition", solution.side_condition, tolerances.side_condition
            )

    def _solve_neumann(self, context: CaseContext) -> None:
        tolerances = context.config.tolerances
        solution = solve_neumann(
            context.domain,
            context.data,
            rcond=tolerances.svd_rcond,
            flux_tol=tolerances.flux,
            operators=context.operators,
        )
        context.solution = solution
        context.diagnostics["path"] = solution.path
        context.diagnostics["charges"] = solution.charges.tolist()
        context.diagnostics["kernel_dimension"] = solution.kernel_dimension
        context.diagnostics["offset"] = solution.offset

        fluxes = context.operators.quadrature.component_integrals(solution.corrected_data)
        scale = max(1.0, float(context.domain.weights @ np.abs(context.data)))
        context.metrics["corrected_flux"] = float(np.max(np.abs(fluxes)))
        context.record_check("corrected_flux", context.metrics["corrected_flux"], tolerances.flux * scale)
        context.checks["kernel_dimension"] = solution.kernel_dimension == context.domain.m + 1

    def _solve_dirichlet(self, context: CaseContext) -> None:
        tolerances = context.config.tolerances
        solution = solve_dirichlet(
            context.domain,
            context.data,
            tol=tolerances.exceptional,
            rcond=tolerances.svd_rcond,
            operators=context.operators,
            exceptional_report=context.exceptional,
        )
        context.solution = solution
        context.diagnostics["path"] = "exceptional" if solution.exceptional else "regular"
        context.diagnostics["gammas"] = solution.gammas.tolist()
        context.diagnostics["constant"] = solution.constant
        context.metrics["dirichlet_residual"] = solution.residual
        context.metrics["constancy_std"] = solution.constancy_std
        context.metrics["trace_error"] = solution.trace_error
        context.record_check("dirichlet_residual", solution.residual, tolerances.identity)
        context.record_check("constancy_std", solution.constancy_std, tolerances.identity)
        context.record_check("trace_error", solution.trace_error, tolerances.interior_error)

    def _execute(self, context: CaseContext) -> StageResult:
        problem = context.config.problem
        if problem == "robin":
            self._solve_robin(context)
        elif problem == "neumann":
            self._solve_neumann(context)
        else:
            self._solve_dirichlet(context)

        logger.info(f"Case {context.case_id}: {problem} solved via path {context.diagnostics['path']}")
        return StageResult(context=context, should_stop=False)
