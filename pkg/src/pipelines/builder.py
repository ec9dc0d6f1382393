from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .base import Pipeline, ReportConfig, Stage


@dataclass(frozen=True)
class StageBlock:
    """Factory and ordering constraints for a reusable pipeline stage."""

    id: str
    description: str
    factory: Callable[["PipelineBuildConfig"], Stage]
    required_after: tuple[str, ...] = ()
    required_before: tuple[str, ...] = ()


@dataclass(frozen=True)
class PipelineBuildConfig:
    """Declarative config used to build a runtime pipeline."""

    name: str
    preset: str
    stage_ids: tuple[str, ...] | None = None
    report_config: ReportConfig = field(default_factory=ReportConfig)
    step_configs: dict[str, dict[str, Any]] = field(default_factory=dict)


def _step_config(config: PipelineBuildConfig, stage_id: str) -> dict[str, Any]:
    return config.step_configs.get(stage_id, {})


def _geometry_stage(config: PipelineBuildConfig) -> Stage:
    from .stages.geometry_builder import GeometryBuilderStage

    return GeometryBuilderStage()


def _boundary_data_stage(config: PipelineBuildConfig) -> Stage:
    from .stages.boundary_data import BoundaryDataStage

    return BoundaryDataStage()


def _exceptional_stage(config: PipelineBuildConfig) -> Stage:
    from .stages.exceptional_detection import ExceptionalDetectionStage

    return ExceptionalDetectionStage()


def _solver_stage(config: PipelineBuildConfig) -> Stage:
    from .stages.problem_solver import ProblemSolverStage

    return ProblemSolverStage()


def _field_evaluation_stage(config: PipelineBuildConfig) -> Stage:
    from .stages.field_evaluation import FieldEvaluationStage

    step = _step_config(config, "FieldEvaluationStage")
    return FieldEvaluationStage(min_distance=float(step.get("minDistance", 0.1)))


def _identity_stage(config: PipelineBuildConfig) -> Stage:
    from .stages.identity_check import IdentityCheckStage

    step = _step_config(config, "IdentityCheckStage")
    return IdentityCheckStage(
        max_mode=int(step.get("maxMode", 8)),
        key_formula_nodes=int(step.get("keyFormulaNodes", 8)),
    )


def _oracle_stage(config: PipelineBuildConfig) -> Stage:
    from .stages.oracle_check import OracleCheckStage

    step = _step_config(config, "OracleCheckStage")
    return OracleCheckStage(multiplier=int(step.get("multiplier", 8)))


def _report_stage(config: PipelineBuildConfig) -> Stage:
    from .stages.report_writer import ReportWriterStage

    step = _step_config(config, "ReportWriterStage")
    write_files = bool(step.get("writeFiles", config.report_config.write_files))
    return ReportWriterStage(report_config=ReportConfig(write_files=write_files))


STAGE_BLOCKS: dict[str, StageBlock] = {
    "GeometryBuilderStage": StageBlock(
        id="GeometryBuilderStage",
        description="Sample and validate the boundary curves",
        factory=_geometry_stage,
        required_before=("ReportWriterStage",),
    ),
    "BoundaryDataStage": StageBlock(
        id="BoundaryDataStage",
        description="Evaluate h and the boundary data at the nodes",
        factory=_boundary_data_stage,
        required_after=("GeometryBuilderStage",),
        required_before=("ProblemSolverStage",),
    ),
    "ExceptionalDetectionStage": StageBlock(
        id="ExceptionalDetectionStage",
        description="Compute the Robin constant of the outer curve",
        factory=_exceptional_stage,
        required_after=("GeometryBuilderStage",),
    ),
    "ProblemSolverStage": StageBlock(
        id="ProblemSolverStage",
        description="Solve the Robin, Neumann or Dirichlet problem",
        factory=_solver_stage,
        required_after=("BoundaryDataStage",),
    ),
    "FieldEvaluationStage": StageBlock(
        id="FieldEvaluationStage",
        description="Evaluate the solved field at interior probes",
        factory=_field_evaluation_stage,
        required_after=("ProblemSolverStage",),
    ),
    "IdentityCheckStage": StageBlock(
        id="IdentityCheckStage",
        description="Run the operator identity suite",
        factory=_identity_stage,
        required_after=("GeometryBuilderStage",),
    ),
    "OracleCheckStage": StageBlock(
        id="OracleCheckStage",
        description="Compare assembled operators with brute-force quadrature",
        factory=_oracle_stage,
        required_after=("GeometryBuilderStage",),
    ),
    "ReportWriterStage": StageBlock(
        id="ReportWriterStage",
        description="Assemble the report and write JSON/CSV outputs",
        factory=_report_stage,
    ),
}

SOLVE_STAGE_IDS = (
    "GeometryBuilderStage",
    "BoundaryDataStage",
    "ExceptionalDetectionStage",
    "ProblemSolverStage",
    "FieldEvaluationStage",
    "ReportWriterStage",
)

PIPELINE_PRESET_STAGE_IDS: dict[str, tuple[str, ...]] = {
    "solve": SOLVE_STAGE_IDS,
    "convergence": SOLVE_STAGE_IDS,
    "detect_exceptional": (
        "GeometryBuilderStage",
        "ExceptionalDetectionStage",
        "ReportWriterStage",
    ),
    "identities": (
        "GeometryBuilderStage",
        "IdentityCheckStage",
        "ReportWriterStage",
    ),
    "oracle": (
        "GeometryBuilderStage",
        "OracleCheckStage",
        "ReportWriterStage",
    ),
}


def resolve_stage_ids(config: PipelineBuildConfig) -> tuple[str, ...]:
    if config.stage_ids is not None:
        return config.stage_ids

    preset = config.preset.strip()
    try:
        return PIPELINE_PRESET_STAGE_IDS[preset]
    except KeyError as exc:
        raise ValueError(f"Unsupported pipeline preset: {config.preset}") from exc


def validate_stage_order(stage_ids: tuple[str, ...]) -> None:
    """Reject orderings that break a block's required_after/required_before."""
    position = {stage_id: index for index, stage_id in enumerate(stage_ids)}
    for stage_id in stage_ids:
        block = STAGE_BLOCKS[stage_id]
        for before in block.required_after:
            if before in position and position[before] > position[stage_id]:
                raise ValueError(f"Stage {stage_id} must run after {before}")
        for after in block.required_before:
            if after in position and position[after] < position[stage_id]:
                raise ValueError(f"Stage {stage_id} must run before {after}")


def build_pipeline(config: PipelineBuildConfig) -> Pipeline:
    stage_ids = resolve_stage_ids(config)
    stages: list[Stage] = []

    for stage_id in stage_ids:
        try:
            block = STAGE_BLOCKS[stage_id]
        except KeyError as exc:
            raise ValueError(f"Unknown pipeline stage: {stage_id}") from exc
        stages.append(block.factory(config))

    validate_stage_order(stage_ids)
    return Pipeline(name=config.name, stages=stages)
