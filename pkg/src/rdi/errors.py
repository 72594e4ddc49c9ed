"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition or domain invariant."""


class FormatError(ValueError):
    """A file does not conform to its interchange format; message carries the location."""
