import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from models import ErrorResponse, Report
from src.errors import BoundaryIntegralError, ConfigError
from src.harness import load_config, run_batch, run_convergence, worker_count
from src.pipelines.registry import COMMANDS

load_dotenv()

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_CONFIG = 2


def _node_counts(text: str) -> List[int]:
    try:
        counts = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"node counts must be integers: {text}") from e
    if len(counts) < 2:
        raise argparse.ArgumentTypeError("give at least two node counts, e.g. 32,64,128")
    return counts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laplace-bie",
        description="Boundary integral solver for the Laplace equation in multiply connected planar domains",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    for command in COMMANDS:
        sub = verbs.add_parser(command.verb, help=command.description)
        sub.add_argument("configs", nargs="+", help="case config JSON file(s)")
        if command.verb == "convergence":
            sub.add_argument(
                "--nodes",
                type=_node_counts,
                default=[32, 64, 128],
                help="comma separated nodes per component (default 32,64,128)",
            )
    return parser


def _emit(payload: str) -> None:
    sys.stdout.write(payload + "\n")
    sys.stdout.flush()


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        configs = [load_config(path) for path in args.configs]
        workers = worker_count()
    except ConfigError as e:
        logger.error(f"Rejected configuration: {e}")
        _emit(ErrorResponse(error=str(e)).model_dump_json())
        return EXIT_BAD_CONFIG

    try:
        if args.verb == "convergence":
            reports: List[Report] = [
                run_convergence(config, args.nodes, workers) for config in configs
            ]
        else:
            reports = run_batch(configs, args.verb, workers)
    except BoundaryIntegralError as e:
        logger.error(f"Run aborted: {e}", exc_info=True)
        _emit(ErrorResponse(error=str(e)).model_dump_json())
        return EXIT_FAILED

    for report in reports:
        if report.error:
            _emit(ErrorResponse(case=report.case_id, error=report.error).model_dump_json())
        _emit(report.model_dump_json(indent=2))

    failed = [report.case_id for report in reports if not report.passed]
    if failed:
        logger.error(f"Cases with failed checks: {', '.join(failed)}")
        return EXIT_FAILED
    logger.info(f"All {len(reports)} case(s) passed")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
