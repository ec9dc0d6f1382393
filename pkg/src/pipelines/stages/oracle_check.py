from ..base import Stage, StageResult, CaseContext
from src.oracle import oracle_on_nodes
from src.solvers import detect_exceptional
import logging

import numpy as np

logger = logging.getLogger(__name__)


def reference_density(j: int, t: np.ndarray) -> np.ndarray:
    return np.cos(t) + 0.5 * np.sin(2.0 * t) + 0.1 * j


class OracleCheckStage(Stage):
    """Recompute layer operator actions by brute-force quadrature"""

    def __init__(self, multiplier: int = 8):
        self.multiplier = multiplier

    def _execute(self, context: CaseContext) -> StageResult:
        domain = context.domain
        ops = context.operators
        tolerance = context.config.tolerances.oracle
        density = np.concatenate(
            [reference_density(j, c.t) for j, c in enumerate(domain.components)]
        )

        assembled = {
            "single_layer": ops.S @ density,
            "double_layer": ops.D @ density,
            "adjoint_double_layer": ops.K @ density,
        }
        for kernel, values in assembled.items():
            reference = oracle_on_nodes(
                kernel, domain, reference_density, self.multiplier, tol=tolerance
            )
            name = f"oracle_{kernel}"
            context.identities[name] = float(np.max(np.abs(values - reference)))
            context.record_check(name, context.identities[name], tolerance)

        outer = domain.outer.spec
        if outer.kind == "circle":
            report = detect_exceptional(domain, context.config.tolerances.exceptional, ops)
            closed_form = np.log(outer.radius) / (2.0 * np.pi)
            context.diagnostics["robin_constant"] = report.robin_constant
            context.identities["robin_constant_closed_form"] = abs(
                report.robin_constant - closed_form
            )
            context.record_check(
                "robin_constant_closed_form",
                context.identities["robin_constant_closed_form"],
                1e-10,
            )

        logger.info(f"Case {context.case_id}: oracle comparisons {context.identities}")
        return StageResult(context=context, should_stop=False)
