from typing import Any

from ..base import ReportConfig
from .base import Command


class ConvergenceCommand(Command):
    @property
    def name(self) -> str:
        return "convergence"

    @property
    def verb(self) -> str:
        return "convergence"

    @property
    def description(self) -> str:
        return "Repeats the solve at several node counts and records the error decay."

    @property
    def report_config(self) -> ReportConfig:
        return ReportConfig(write_files=False)

    @property
    def step_configs(self) -> dict[str, dict[str, Any]]:
        return {"ReportWriterStage": {"writeFiles": False}}
