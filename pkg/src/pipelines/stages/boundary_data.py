from ..base import Stage, StageResult, CaseContext
from .case_support import explicit_values, nodal_expression
from src.errors import ConfigError
from src.manufactured import manufactured_case
import logging

import numpy as np

logger = logging.getLogger(__name__)


class BoundaryDataStage(Stage):
    """Evaluate the Robin coefficient and the boundary data at the nodes"""

    def _resolve_h(self, context: CaseContext) -> np.ndarray:
        spec = context.config.h
        domain = context.domain
        if spec is None:
            return np.zeros(domain.n_nodes)
        if spec.constant is not None:
            return np.full(domain.n_nodes, float(spec.constant))
        if spec.expression is not None:
            return nodal_expression(domain, spec.expression)
        return explicit_values(domain, spec.values, "h")

    def _execute(self, context: CaseContext) -> StageResult:
        config = context.config
        domain = context.domain
        if config.data is None:
            raise ConfigError(f"Case {config.id} has no boundary data")

        context.h = self._resolve_h(context)
        if config.data.manufactured is not None:
            case = manufactured_case(
                config.data.manufactured.name, config.data.manufactured.params, domain
            )
            context.data = case.data_for(config.problem, context.h)
            context.exact = case.exact
            context.diagnostics["manufactured"] = case.name
        elif config.data.expression is not None:
            context.data = nodal_expression(domain, config.data.expression)
        else:
            context.data = explicit_values(domain, config.data.values, "data")

        logger.info(
            f"Case {config.id}: {config.problem} data ready "
            f"(exact field {'available' if context.exact else 'unknown'})"
        )
        return StageResult(context=context, should_stop=False)
