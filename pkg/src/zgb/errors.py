"""Exception types shared across the package."""


class ZgbError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ZgbError, ValueError):
    """Argument outside the validated domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at the pole s = 1 of the zeta function."""


class OracleRangeError(DomainError):
    """Evaluation requested outside the range where the accuracy contract holds."""


class ConvergenceError(ZgbError, RuntimeError):
    """An iterative method failed to converge within its iteration budget."""


class CoverageError(ZgbError, ValueError):
    """Query beyond a table's audited coverage, or tables with disjoint coverage."""


class TableFormatError(ZgbError, ValueError):
    """Malformed zero-table file.  Carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AuditError(ZgbError, RuntimeError):
    """Completeness audit failed.  Carries the audit report when available."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class ValidationError(ZgbError, RuntimeError):
    """Cross-validation between two zero tables failed fatally."""
