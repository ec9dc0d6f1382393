from ..base import Stage, StageResult, CaseContext
from src.solvers import detect_exceptional
import logging

logger = logging.getLogger(__name__)


class ExceptionalDetectionStage(Stage):
    """Decide whether the outer boundary is exceptional"""

    def _execute(self, context: CaseContext) -> StageResult:
        tol = context.config.tolerances.exceptional
        report = detect_exceptional(context.domain, tol, context.operators)
        context.exceptional = report
        context.diagnostics["robin_constant"] = report.robin_constant
        context.diagnostics["is_exceptional"] = report.is_exceptional
        return StageResult(context=context, should_stop=False)
