"""Exception types shared across the kernel.

Every error raised on bad input derives from :class:`GradedAlgebraError`, so
callers (the CLI in particular) can catch one base class and report a
diagnostic instead of a traceback.
"""


class GradedAlgebraError(Exception):
    """Base class for all kernel errors."""


class TableMismatch(GradedAlgebraError):
    """Operands were built over different variable tables."""


class TruncationMismatch(GradedAlgebraError):
    """Operands carry incompatible truncation orders."""


class ShiftCreatesDegreeZero(GradedAlgebraError):
    """A degree shift would move some dimension onto degree 0."""


class OddExponent(GradedAlgebraError):
    """A monomial carries an odd-degree generator with exponent >= 2."""


class ZeroInput(GradedAlgebraError):
    """The zero element has no filtration level."""


class OrderTooLarge(GradedAlgebraError):
    """A Taylor expansion order exceeds the configured cap."""


class BoundTooLarge(GradedAlgebraError):
    """A brute-force search bound exceeds the guard threshold."""


class NotASolution(GradedAlgebraError):
    """A vector does not solve the degree equation it was paired with."""


class CapTooSmall(GradedAlgebraError):
    """A weight cap is below the bound needed for an exact enumeration."""


class NonFormalSubstitution(GradedAlgebraError):
    """A base-symbol substitution has no formal (terminating) expansion."""


class NonComposableDomains(GradedAlgebraError):
    """Morphism tables do not chain."""


class MissingTransition(GradedAlgebraError):
    """An atlas lacks a transition required by a listed triple."""


class DimensionMismatch(GradedAlgebraError):
    """A section coefficient list has the wrong length."""


class ScriptError(GradedAlgebraError):
    """Parse or semantic error in a script, with source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line:
            return f"line {self.line}:{self.column}: {self.message}"
        return self.message
