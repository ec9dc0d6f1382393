from ..base import Stage, StageResult, CaseContext
from src.evaluate import eval_solution, five_point_laplacian
from src.solvers import NeumannSolution
import logging

import numpy as np

logger = logging.getLogger(__name__)

HARMONIC_PROBE_DISTANCE = 0.3
HARMONIC_LIMIT = 1e-4


class FieldEvaluationStage(Stage):
    """Evaluate the solution at interior probes and compare with the exact field"""

    def __init__(self, min_distance: float = 0.1):
        self.min_distance = min_distance

    def _execute(self, context: CaseContext) -> StageResult:
        domain = context.domain
        solution = context.solution
        probes = domain.interior_test_points(offset_fraction=context.config.probe_offset)
        distances = domain.distance_to_boundary(probes)
        keep = distances >= self.min_distance
        if keep.any():
            probes, distances = probes[keep], distances[keep]
        else:
            logger.warning(
                f"Case {context.case_id}: no probe is {self.min_distance} away from the boundary"
            )
        values = np.asarray(eval_solution(solution, probes))
        context.probes = probes
        context.probe_values = values
        context.metrics["probe_count"] = float(probes.shape[0])
        context.metrics["probe_min_distance"] = float(distances.min())

        if context.exact is not None:
            errors = values - context.exact(probes)
            if isinstance(solution, NeumannSolution):
                errors = errors - errors.mean()
            context.metrics["interior_max_error"] = float(np.max(np.abs(errors)))
            context.metrics["interior_l2_error"] = float(np.sqrt(np.mean(errors**2)))
            context.record_check(
                "interior_error",
                context.metrics["interior_max_error"],
                context.config.tolerances.interior_error,
            )

        deep = probes[distances >= HARMONIC_PROBE_DISTANCE]
        if deep.shape[0]:
            laplacian = five_point_laplacian(lambda p: eval_solution(solution, p), deep)
            context.metrics["laplacian_max"] = float(np.max(np.abs(laplacian)))
            context.record_check("harmonic", context.metrics["laplacian_max"], HARMONIC_LIMIT)

        logger.info(f"Case {context.case_id}: evaluated field at {probes.shape[0]} probes")
        return StageResult(context=context, should_stop=False)
