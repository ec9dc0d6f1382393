from abc import ABC, abstractmethod
from typing import Any

from ..base import Pipeline, ReportConfig
from ..builder import PipelineBuildConfig, build_pipeline


class Command(ABC):
    """Base class for all CLI commands"""

    @property
    @abstractmethod
    def name(self) -> str:
        """Command name (e.g., 'detect_exceptional')"""
        pass

    @property
    @abstractmethod
    def verb(self) -> str:
        """CLI verb that selects the command (e.g., 'detect-exceptional')"""
        pass

    @property
    def preset(self) -> str:
        return self.name

    @property
    def description(self) -> str:
        return ""

    @property
    def report_config(self) -> ReportConfig:
        return ReportConfig(write_files=True)

    @property
    def stage_ids(self) -> tuple[str, ...] | None:
        return None

    @property
    def step_configs(self) -> dict[str, dict[str, Any]]:
        return {}

    def _build_config(self) -> PipelineBuildConfig:
        return PipelineBuildConfig(
            name=self.name,
            preset=self.preset,
            stage_ids=self.stage_ids,
            report_config=self.report_config,
            step_configs=self.step_configs,
        )

    def get_pipeline(self) -> Pipeline:
        """Return the pipeline for this command"""
        return build_pipeline(self._build_config())
