"""Exception hierarchy shared by all modules."""


class TowerError(Exception):
    """Base class for every error raised by this package."""

    kind = "error"


class StructuralError(TowerError, ValueError):
    """A presentation datum violates the shape rules (indices, signs, tail lengths)."""

    kind = "structural-error"


class ParseError(TowerError, ValueError):
    kind = "parse-error"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InconsistentPresentation(TowerError):
    """The relations do not define a group with the expected normal series."""

    kind = "inconsistency-error"


class PreconditionViolation(TowerError):
    kind = "precondition-violation"


class FormError(PreconditionViolation):
    """Input is not in the special shape an operation requires."""

    kind = "form-error"


class InternalAssertionError(TowerError, AssertionError):
    """An internal side condition that should hold on consistent input failed."""

    kind = "assertion-failure"


class DidNotClose(TowerError):
    """Coset enumeration exceeded its table bound."""

    kind = "did-not-close"

    def __init__(self, bound: int):
        self.bound = bound
        super().__init__(f"coset table exceeded {bound} rows")
