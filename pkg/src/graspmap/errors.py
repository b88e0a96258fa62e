"""Exception types shared across the toolkit (and mapped to CLI exit codes)."""


class ValidationError(ValueError):
    """Invalid input, configuration or contract violation (CLI exit code 2)."""


class DataFormatError(ValidationError):
    """Malformed or inconsistent on-disk data (CLI exit code 3)."""


class EmptyMaskError(ValidationError):
    """The target segmentation mask has no pixels."""


class NoViablePixelError(ValidationError):
    """Every masked pixel has zero predicted grasp quality."""
