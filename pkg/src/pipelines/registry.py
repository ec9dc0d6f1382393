from typing import Optional, List
from .commands.base import Command
from .commands.solve import SolveCommand
from .commands.convergence import ConvergenceCommand
from .commands.detect_exceptional import DetectExceptionalCommand
from .commands.identities import IdentitiesCommand
from .commands.oracle import OracleCommand


COMMANDS: List[Command] = [
    SolveCommand(),
    ConvergenceCommand(),
    DetectExceptionalCommand(),
    IdentitiesCommand(),
    OracleCommand(),
]


def detect_command(verb: str) -> Optional[Command]:
    """Find the command selected by a CLI verb"""
    normalized = verb.strip()
    for command in COMMANDS:
        if normalized in (command.verb, command.name):
            return command
    return None


def available_verbs() -> List[str]:
    return [command.verb for command in COMMANDS]
