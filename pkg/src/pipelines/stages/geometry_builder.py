from ..base import Stage, StageResult, CaseContext
from .case_support import build_domain_from_config
from src.operators import LayerOperators
import logging

logger = logging.getLogger(__name__)


class GeometryBuilderStage(Stage):
    """Sample the configured curves and attach a lazy operator bundle"""

    def _execute(self, context: CaseContext) -> StageResult:
        domain = build_domain_from_config(context.config, context.nodes)
        context.domain = domain
        context.operators = LayerOperators(domain)
        context.nodes = [c.n_nodes for c in domain.components]
        context.diagnostics["domain_id"] = domain.domain_id
        context.diagnostics["holes"] = domain.m
        logger.info(
            f"Case {context.case_id}: domain {domain.domain_id} with {domain.m} holes, nodes {context.nodes}"
        )
        return StageResult(context=context, should_stop=False)
