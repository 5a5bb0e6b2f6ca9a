"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class GermforgeError(Exception):
    exit_code = 1


class GermSyntaxError(GermforgeError):
    """Malformed germ text. ``position`` is the 0-based offset of the offending token."""

    exit_code = 1

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class CompositionError(GermforgeError):
    """A transcendental function applied to an argument with nonzero constant term."""

    exit_code = 1


class CertificationError(GermforgeError):
    exit_code = 2


class InconclusiveError(CertificationError):
    """The truncation degree is too small to decide the question asked."""


class InfiniteCodimensionError(GermforgeError):
    exit_code = 3

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class NumericBudgetError(GermforgeError):
    exit_code = 4


class InconsistentSystemError(GermforgeError):
    """A linear system that had to be solved exactly has no solution."""

    exit_code = 2


class NotSingularError(GermforgeError):
    """The germ does not satisfy g(0,0) = g_x(0,0) = 0."""

    exit_code = 1
