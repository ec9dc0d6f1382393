from ..base import Stage, StageResult, CaseContext, ReportConfig
from models import CaseConfig, Report
from src.solvers import DirichletSolution, NeumannSolution, RobinSolution
from pathlib import Path
import logging

import numpy as np

logger = logging.getLogger(__name__)

CSV_HEADER = "x1,x2,value"


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def write_report_file(report: Report, config: CaseConfig) -> Path | None:
    """Write the JSON report to config.output.report when one is set."""
    if not config.output.report:
        return None
    target = Path(config.output.report)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Wrote report for case {config.id} to {target}")
    return target


def boundary_density(solution) -> np.ndarray | None:
    if isinstance(solution, (RobinSolution, NeumannSolution)):
        return solution.psi.values
    if isinstance(solution, DirichletSolution):
        return solution.density.values
    return None


class ReportWriterStage(Stage):
    """Assemble the report and write JSON/CSV outputs"""

    def __init__(self, report_config: ReportConfig | None = None):
        self.report_config = report_config or ReportConfig()

    def _write_csv(self, context: CaseContext, csv_dir: Path) -> None:
        csv_dir.mkdir(parents=True, exist_ok=True)
        density = boundary_density(context.solution)
        if context.domain is not None and density is not None:
            rows = np.column_stack((context.domain.points, density))
            np.savetxt(csv_dir / f"{context.case_id}_nodes.csv", rows, delimiter=",", header=CSV_HEADER, comments="")
        if context.probes is not None and context.probe_values is not None:
            rows = np.column_stack((context.probes, context.probe_values))
            np.savetxt(csv_dir / f"{context.case_id}_probes.csv", rows, delimiter=",", header=CSV_HEADER, comments="")

    def _execute(self, context: CaseContext) -> StageResult:
        config = context.config
        report = Report(
            case_id=config.id,
            command=context.command or "solve",
            problem=config.problem if context.solution is not None else None,
            path=context.diagnostics.get("path"),
            nodes=list(context.nodes or []),
            metrics=_plain(context.metrics),
            identities=_plain(context.identities),
            diagnostics=_plain(context.diagnostics),
            timings=_plain(context.timings),
            checks=_plain(context.checks),
            passed=all(context.checks.values()),
        )
        context.report = report

        if self.report_config.write_files:
            write_report_file(report, config)
            if config.output.csv_dir:
                self._write_csv(context, Path(config.output.csv_dir))

        return StageResult(context=context, should_stop=False)
