"""Domain exceptions shared by the services, the HTTP API and the CLI."""
from fastapi import status


class MpfError(Exception):
    """Base class; `status_code` is what the HTTP API answers with."""

    status_code = status.HTTP_400_BAD_REQUEST


class DimensionMismatch(MpfError):
    pass


class SingularMatrix(MpfError):
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY


class DuplicateExponent(MpfError):
    pass


class RoundingCollision(MpfError):
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY


class Infeasible(MpfError):
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY


class InvalidFormula(MpfError):
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY


class DimensionCap(MpfError):
    pass


class Unreachable(MpfError):
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY


class FixtureParseError(MpfError):
    """A table fixture could not be read; the message starts with a row locator."""

    def __init__(self, locator: str, message: str):
        super().__init__(f"{locator}: {message}")
        self.locator = locator
