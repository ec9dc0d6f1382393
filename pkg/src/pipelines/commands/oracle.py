from .base import Command


class OracleCommand(Command):
    @property
    def name(self) -> str:
        return "oracle"

    @property
    def verb(self) -> str:
        return "oracle"

    @property
    def description(self) -> str:
        return "Recomputes operator actions with brute-force quadrature at higher resolution."
