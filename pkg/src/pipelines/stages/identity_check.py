from ..base import Stage, StageResult, CaseContext
from src.errors import SolverError
from src.kernels import fund_solution
from src.oracle import double_layer_flux_by_differences
from src.operators import TruncatedSVD
from src.solvers import eigenspace_V, psi_basis
import logging

import numpy as np

logger = logging.getLogger(__name__)

KEY_FORMULA_TOL = 1e-4


class IdentityCheckStage(Stage):
    """Operator identity suite: reduction, Gauss, duality, key formula, eigenspace"""

    def __init__(self, max_mode: int = 8, key_formula_nodes: int = 8):
        self.max_mode = max_mode
        self.key_formula_nodes = key_formula_nodes

    def _mode_densities(self, context: CaseContext) -> np.ndarray:
        domain = context.domain
        columns = []
        for j, component in enumerate(domain.components):
            for k in range(self.max_mode + 1):
                for wave in (np.cos, np.sin):
                    if k == 0 and wave is np.sin:
                        continue
                    density = np.zeros(domain.n_nodes)
                    density[domain.slices[j]] = wave(k * component.t)
                    columns.append(density)
        return np.column_stack(columns)

    def _record(self, context: CaseContext, name: str, value: float, limit: float) -> None:
        context.identities[name] = float(value)
        context.record_check(name, float(value), limit)

    def _eigenspace_checks(self, context: CaseContext, limit: float) -> None:
        domain = context.domain
        ops = context.operators
        try:
            vectors = eigenspace_V(domain, operators=ops)
            context.checks["eigenspace_dimension"] = len(vectors) == domain.m
        except SolverError as e:
            logger.warning(f"Case {context.case_id}: {e}")
            context.checks["eigenspace_dimension"] = False
            context.diagnostics["eigenspace_error"] = str(e)
            return

        if domain.m == 0:
            return
        basis = psi_basis(domain, operators=ops)
        centers = domain.hole_centers()
        outer = domain.slices[0]
        delta_error = 0.0
        outer_error = 0.0
        for h, psi in enumerate(basis):
            kernel = fund_solution(centers[:, None, :], domain.points[None, :, :])
            at_centers = kernel @ (domain.weights * psi.values)
            delta_error = max(delta_error, float(np.max(np.abs(at_centers - np.eye(domain.m)[h]))))
            outer_error = max(outer_error, float(np.max(np.abs((ops.S @ psi.values)[outer]))))
        self._record(context, "psi_delta", delta_error, limit)
        self._record(context, "psi_outer", outer_error, limit)

    def _key_formula_check(self, context: CaseContext) -> None:
        domain = context.domain
        ops = context.operators
        psi = np.concatenate([np.cos(c.t) + 0.5 * np.sin(2 * c.t) for c in domain.components])
        nodes = np.concatenate(
            [
                part.start + np.linspace(0, c.n_nodes, self.key_formula_nodes, endpoint=False).astype(int)
                for part, c in zip(domain.slices, domain.components)
            ]
        )
        composed = (ops.T @ (ops.S @ (ops.T @ psi)))[nodes]
        differenced = double_layer_flux_by_differences(domain, psi, nodes)
        self._record(context, "key_formula", np.max(np.abs(composed - differenced)), KEY_FORMULA_TOL)

    def _execute(self, context: CaseContext) -> StageResult:
        domain = context.domain
        ops = context.operators
        limit = context.config.tolerances.identity
        ones = np.ones(domain.n_nodes)
        w = domain.weights

        modes = self._mode_densities(context)
        reduction = ops.Jprime.matrix @ (ops.J.matrix @ modes) - ops.reduced.matrix @ modes
        self._record(context, "reduction_identity", np.max(np.abs(reduction)), limit)
        self._record(context, "gauss_principal_value", np.max(np.abs(ops.D @ ones - 0.5)), 1e-10)
        self._record(
            context,
            "gauss_interior_trace",
            np.max(np.abs(ops.interior_trace_of_double_layer(ones) - 1.0)),
            1e-10,
        )
        duality = ops.K.matrix - (ops.D.matrix.T * w[None, :]) / w[:, None]
        self._record(context, "adjoint_duality", np.max(np.abs(duality)), 1e-12)
        weighted = w[:, None] * ops.S.matrix
        self._record(context, "single_layer_symmetry", np.max(np.abs(weighted - weighted.T)), 1e-10)
        if domain.m == 0 and domain.outer.spec.kind == "circle":
            normal = ops.interior_normal_derivative_of_single_layer(ones)
            self._record(context, "circle_single_layer_flux", np.max(np.abs(normal)), 1e-10)

        svd = TruncatedSVD(ops.reduced.matrix, rcond=context.config.tolerances.svd_rcond)
        context.diagnostics["kernel_dimension"] = svd.nullity
        context.checks["kernel_dimension"] = svd.nullity == domain.m + 1

        self._key_formula_check(context)
        self._eigenspace_checks(context, limit)
        logger.info(f"Case {context.case_id}: identities {context.identities}")
        return StageResult(context=context, should_stop=False)
