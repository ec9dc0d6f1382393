from .base import Command


class DetectExceptionalCommand(Command):
    @property
    def name(self) -> str:
        return "detect_exceptional"

    @property
    def verb(self) -> str:
        return "detect-exceptional"

    @property
    def description(self) -> str:
        return "Computes the Robin constant of the outer curve and flags exceptional boundaries."
