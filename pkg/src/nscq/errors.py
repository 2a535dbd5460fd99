"""Shared exception types."""


class CapacityError(RuntimeError):
    """A requested computation exceeds a documented size cap."""


class InstanceFormatError(ValueError):
    """An instance file or dictionary does not match the expected schema."""
