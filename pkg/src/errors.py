"""
Exception hierarchy shared by every module of the kernel.

Input and precondition problems derive from KernelError (a ValueError), so callers
that only care about "bad input" can catch ValueError. Results that would contradict
a proved statement derive from KernelAssertionError (an AssertionError) and signal a
kernel bug rather than bad input.
"""


class KernelError(ValueError):
    """Base class for recoverable kernel errors."""


class ExpressionError(KernelError):
    """An expression string could not be turned into a rational function."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


class ExpressionSyntaxError(ExpressionError):
    pass


class UnknownSymbolError(ExpressionError):
    pass


class ZeroDivisionInExpression(ExpressionError):
    pass


class UnknownVariableError(KernelError):
    pass


class ForeignElementError(KernelError):
    """An element does not belong to the presentation it was used with."""


class PreconditionError(KernelError):
    pass


class EmptyVarietyError(KernelError):
    """The ideal of a D-variety is the unit ideal."""


class InvalidSectionError(KernelError):
    """The section fails the shifted tangent bundle equations."""

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class SectionUndefinedError(KernelError):
    """A section denominator vanishes on the variety or at a point."""


class NotOnVarietyError(KernelError):
    pass


class UndefinedFunctionError(KernelError):
    pass


class NotSharpPointError(KernelError):
    pass


class NonFlatFormError(KernelError):
    pass


class ZeroElementError(KernelError):
    pass


class UnsupportedPlaceError(KernelError):
    """A zero or pole is not a rational point."""


class IdentityFailedError(KernelError):
    pass


class ScenarioError(KernelError):
    """A scenario file is malformed; carries the 1-based source location."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        location = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{location}{message}")
        self.message = message
        self.line = line
        self.column = column


class KernelAssertionError(AssertionError):
    """A computed result contradicts a proved statement."""


class DependencyNotConstantError(KernelAssertionError):
    pass


class HiddenConstantError(KernelAssertionError):
    pass


class TheoremViolationError(KernelAssertionError):
    pass
