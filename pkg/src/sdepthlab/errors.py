"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: input problems exit with 3,
resource limits (poset size caps, time limits) with 4.
"""


class SdepthLabError(Exception):
    """Base class for every error raised by this package."""


class InputError(SdepthLabError):
    """Malformed or out-of-range user input."""


class IdealSyntaxError(InputError):
    """Syntax error in the ideal text format; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidPresentationError(InputError):
    """A numerator/denominator pair that does not present a nonzero module."""


class ResourceCapError(SdepthLabError):
    """A configured resource limit was exceeded."""


class PosetCapExceededError(ResourceCapError):
    """The multidegree box of a presentation is larger than the allowed cap."""


class TimeLimitExceededError(ResourceCapError):
    """A search exceeded its wall-clock budget; result is unknown, not infeasible."""
