"""Exception types shared across the package."""


class UVFError(Exception):
    """Base class for all errors raised by uvfwalk."""


class InvalidArgument(UVFError, ValueError):
    pass


class OutOfBounds(UVFError, IndexError):
    pass


class DegenerateField(UVFError):
    """Interpolated field vectors cancelled out (norm below the configured minimum)."""


class NoPeak(UVFError):
    """A heatmap is constant, so no peak can be localized."""

    def __init__(self, message, ordinal=None):
        super().__init__(message)
        self.ordinal = ordinal


class GenerationFailed(UVFError):
    pass


class FormatError(UVFError):
    """Malformed grid or landmark file. ``offset`` is the byte offset of the problem, if known."""

    def __init__(self, message, path=None, offset=None):
        parts = [message]
        if path is not None:
            parts.insert(0, f"{path}:")
        if offset is not None:
            parts.append(f"(at byte offset {offset})")
        super().__init__(" ".join(parts))
        self.path = path
        self.offset = offset
