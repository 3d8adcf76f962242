"""Exception hierarchy shared across the package."""

from __future__ import annotations


class QStratError(Exception):
    """Base class for all package errors."""


class ContractError(QStratError, ValueError):
    """A precondition of an operation was violated."""


class ValidationError(ContractError):
    """An object failed its structural invariants."""


class DatasetError(QStratError):
    """Base class for dataset loading and saving failures."""


class MissingIndexError(DatasetError):
    pass


class MalformedEntryError(DatasetError):
    pass


class UnsafePathError(DatasetError):
    pass


class ArtifactParseError(DatasetError):
    pass


class ConflictError(QStratError):
    """Refusing to overwrite an existing output location."""


class BackendError(QStratError):
    """Malformed backend specification or backend file."""


class CompileError(QStratError):
    pass


class CapacityError(CompileError):
    """Circuit is wider than the target backend."""


class TranslationError(CompileError):
    """Gate has no entry in the decomposition table."""


class ExecutionError(QStratError):
    pass


class MitigationError(QStratError):
    pass


class ReportError(QStratError):
    """Matrix document could not be parsed; ``location`` points at the fault."""

    def __init__(self, message: str, location: str = "") -> None:
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
