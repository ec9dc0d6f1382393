from .base import Command


class IdentitiesCommand(Command):
    @property
    def name(self) -> str:
        return "identities"

    @property
    def verb(self) -> str:
        return "identities"

    @property
    def description(self) -> str:
        return "Runs the operator identity suite on the configured geometry."
