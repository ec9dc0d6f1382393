from .base import Command


class SolveCommand(Command):
    @property
    def name(self) -> str:
        return "solve"

    @property
    def verb(self) -> str:
        return "solve"

    @property
    def description(self) -> str:
        return "Solves the configured boundary value problem and checks it against the exact field."
