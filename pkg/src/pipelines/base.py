from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Dict, Any, List, Callable, TYPE_CHECKING
import logging
import time

import numpy as np

if TYPE_CHECKING:
    from models import CaseConfig, Report
    from src.geometry import Domain
    from src.operators import LayerOperators
    from src.solvers import ExceptionalReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReportConfig:
    """Where a finished report goes."""

    write_files: bool = True


@dataclass
class CaseContext:
    """Shared context passed through all pipeline stages"""

    config: "CaseConfig"
    command: Optional[str] = None
    nodes: Optional[List[int]] = None
    domain: Optional["Domain"] = None
    operators: Optional["LayerOperators"] = None
    h: Optional[np.ndarray] = None
    data: Optional[np.ndarray] = None
    exact: Optional[Callable[[np.ndarray], np.ndarray]] = None
    exceptional: Optional["ExceptionalReport"] = None
    solution: Any = None
    probes: Optional[np.ndarray] = None
    probe_values: Optional[np.ndarray] = None
    metrics: Dict[str, float] = field(default_factory=dict)
    identities: Dict[str, float] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    report: Optional["Report"] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def case_id(self) -> str:
        return self.config.id

    def record_check(self, name: str, value: float, limit: float) -> bool:
        passed = bool(np.isfinite(value) and value <= limit)
        self.checks[name] = passed
        if not passed:
            logger.warning(f"Check {name} failed for case {self.case_id}: {value:.3e} > {limit:.1e}")
        return passed


@dataclass
class StageResult:
    """Result returned by each stage"""

    context: CaseContext
    should_stop: bool = False
    error: Optional[Exception] = None
    success: bool = True


class Stage:
    """Base class for all pipeline stages"""

    def execute(self, context: CaseContext) -> StageResult:
        """Execute stage and record its wall time"""
        name = self.__class__.__name__
        started = time.perf_counter()
        try:
            logger.info(f"Executing stage: {name}")
            result = self._execute(context)
            logger.info(f"Completed stage: {name}")
            return result
        except Exception as e:
            logger.error(f"Stage {name} failed: {e}", exc_info=True)
            return StageResult(
                context=context, should_stop=True, error=e, success=False
            )
        finally:
            context.timings[name] = time.perf_counter() - started

    def _execute(self, context: CaseContext) -> StageResult:
        """Actual implementation of stage logic"""
        raise NotImplementedError


class Pipeline:
    """Pipeline executes stages sequentially"""

    def __init__(self, name: str, stages: List[Stage]):
        self.name = name
        self.stages = stages

    def execute(self, context: CaseContext) -> StageResult:
        """Execute all stages until completion or stop"""
        logger.info(f"Starting pipeline: {self.name} (case {context.case_id})")

        for stage in self.stages:
            result = stage.execute(context)
            context = result.context

            if result.should_stop:
                if result.error:
                    context.metadata["pipeline_error"] = (
                        f"case {context.case_id}: {result.error}"
                    )
                    logger.error(
                        f"Pipeline {self.name} stopped with error: {result.error}"
                    )
                else:
                    logger.info(f"Pipeline {self.name} stopped early")
                return result

        logger.info(f"Pipeline {self.name} completed successfully")
        return StageResult(context=context, should_stop=False, success=True)
