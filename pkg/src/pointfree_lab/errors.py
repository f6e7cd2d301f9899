"""Exception types shared across the toolkit.

Every library-raised condition has a named class so that callers (and the
command-line front end) can report failures by name.
"""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class PosetInvalid(ToolkitError):
    """The order table violates reflexivity, antisymmetry, or transitivity."""


class ForeignElement(ToolkitError):
    """An element was passed to a frame it does not belong to."""


class NotAFrameMap(ToolkitError):
    """A morphism fails one of the frame-map equations."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotComplemented(ToolkitError):
    """The element has no complement in its frame."""


class NotRatherBelow(ToolkitError):
    """A step value fails the rather-below chain condition at `index`."""

    def __init__(self, index: int, message: str = ""):
        super().__init__(message or f"value {index} fails the rather-below condition")
        self.index = index


class BoundaryNotTopBottom(ToolkitError):
    """A step's leading value is not top or its trailing value is not bottom."""


class GridOverflow(ToolkitError):
    """A refinement grid exceeded the configured size cap."""


class StabilizationNotReached(ToolkitError):
    """An increasing join was still moving at the iteration bound."""

    def __init__(self, bound: int, message: str = ""):
        super().__init__(message or f"join did not stabilize within {bound} terms")
        self.bound = bound


class FamilyOracleInvalid(ToolkitError):
    """A ray family's declared join rule contradicts its members."""


class IsPointwise(ToolkitError):
    """Separation was requested for an instance that is already pointwise."""


class NotAnUpperBound(ToolkitError):
    """The candidate does not dominate the family, so no negative failing
    ray exists and the quotient construction does not apply."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class HypothesisFailed(ToolkitError):
    """The gap-witness construction found no nonzero gap element."""


class NotATruncateSequence(ToolkitError):
    """The sequence violates a truncate condition; `condition` is 1 or 2."""

    def __init__(self, condition: int, witness, message: str = ""):
        super().__init__(
            message or f"condition ({condition}) fails at n={witness}"
        )
        self.condition = condition
        self.witness = witness


class EmptyDownset(ToolkitError):
    """Mobility queries require a nonempty downset."""


class NotConvex(ToolkitError):
    """The presented subgroup is not convex."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedLift(ToolkitError):
    """The piecewise-linear spec falls outside the supported grammar."""


class UnknownSuite(ToolkitError):
    """No suite is registered under the requested name."""


class ParseError(ToolkitError):
    """Input text rejected; carries a 1-based line and column."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column
