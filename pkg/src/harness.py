"""Case orchestration: config loading, single runs, convergence studies and batches."""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from pydantic import ValidationError

from models import CaseConfig, ConvergenceRow, Report

from .errors import ConfigError
from .pipelines.base import CaseContext
from .pipelines.registry import available_verbs, detect_command
from .pipelines.stages.report_writer import write_report_file

logger = logging.getLogger(__name__)

WORKERS_ENV = "LAPLACE_BIE_WORKERS"
DECAY_RATIO = 0.2
ROUNDOFF_FLOOR = 1e-12


def worker_count() -> int:
    raw = os.getenv(WORKERS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError as e:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from e
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV} must be at least 1, got {workers}")
    return workers


def parse_config(document: dict[str, Any]) -> CaseConfig:
    try:
        return CaseConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(f"Invalid case config: {e}") from e


def load_config(path: str | Path) -> CaseConfig:
    source = Path(path)
    try:
        document = json.loads(source.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"Cannot read config {source}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config {source} is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise ConfigError(f"Config {source} must be a JSON object")
    return parse_config(document)


def run_case(
    config: CaseConfig, command: str = "solve", nodes: Sequence[int] | None = None
) -> Report:
    """Run one command pipeline on a case and return its report."""
    selected = detect_command(command)
    if selected is None:
        raise ConfigError(
            f"Unknown command '{command}'. Available: {', '.join(available_verbs())}"
        )

    pipeline = selected.get_pipeline()
    context = CaseContext(
        config=config,
        command=selected.verb,
        nodes=list(nodes) if nodes is not None else None,
    )
    result = pipeline.execute(context)
    if result.success and context.report is not None:
        return context.report

    error = context.metadata.get("pipeline_error") or str(result.error)
    logger.error(f"Case {config.id} failed in {selected.verb}: {error}")
    return Report(
        case_id=config.id,
        command=selected.verb,
        problem=config.problem,
        path=context.diagnostics.get("path"),
        nodes=list(context.nodes or []),
        timings=context.timings,
        error=error,
        passed=False,
    )


def run_convergence(
    config: CaseConfig, node_counts: Sequence[int], workers: int | None = None
) -> Report:
    """Solve at each node count (per component) and record the error decay."""
    if len(node_counts) < 2:
        raise ConfigError("A convergence study needs at least two node counts")
    counts = sorted(int(n) for n in node_counts)
    workers = workers or worker_count()

    def solve_at(n: int) -> Report:
        return run_case(config, "convergence", [n] * len(config.geometry))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        runs = list(pool.map(solve_at, counts))

    rows: list[ConvergenceRow] = []
    for n, run in zip(counts, runs):
        error = run.metrics.get("interior_max_error")
        if run.error or error is None:
            failure = Report(
                case_id=config.id,
                command="convergence",
                problem=config.problem,
                nodes=run.nodes,
                convergence=rows,
                error=run.error or f"no exact field to measure the error at {n} nodes",
                passed=False,
            )
            write_report_file(failure, config)
            return failure
        previous = rows[-1].error if rows else None
        ratio = error / previous if previous else None
        rows.append(ConvergenceRow(nodes=n, error=error, ratio=ratio))
        logger.info(f"Case {config.id}: nodes {n} error {error:.3e} ratio {ratio}")

    decaying = all(
        row.ratio is not None and row.ratio < DECAY_RATIO
        for earlier, row in zip(rows, rows[1:])
        if earlier.error > ROUNDOFF_FLOOR
    )
    final = runs[-1]
    report = Report(
        case_id=config.id,
        command="convergence",
        problem=config.problem,
        path=final.path,
        nodes=final.nodes,
        metrics=final.metrics,
        identities=final.identities,
        diagnostics=final.diagnostics,
        convergence=rows,
        timings={f"nodes_{n}": sum(run.timings.values()) for n, run in zip(counts, runs)},
        checks={**final.checks, "geometric_decay": decaying},
        passed=decaying and final.passed,
    )
    write_report_file(report, config)
    return report


def run_batch(
    configs: Sequence[CaseConfig], command: str = "solve", workers: int | None = None
) -> list[Report]:
    workers = workers or worker_count()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda config: run_case(config, command), configs))
