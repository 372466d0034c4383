class DectException(Exception):  # noqa: N818
    """Root dect exception class."""


class EmptyComplexError(DectException):
    """Operation requires at least one vertex."""


class DegenerateSimplexError(DectException):
    """A simplex repeats a vertex index."""


class DimensionMismatchError(DectException):
    """Ambient dimensions of coordinates and directions disagree."""


class UnknownShapeError(DectException):
    """Requested synthetic shape kind is not registered."""


class ConfigError(DectException):
    """Configuration is inconsistent with the requested operation."""


class ShapeMismatchError(DectException):
    """Array shapes (or grid configurations) are incompatible."""


class NormalizationError(DectException):
    """An ECT grid cannot be normalized in the requested mode."""


class NonFiniteGradientError(DectException):
    """A gradient contained NaN or Inf."""


class NotPointCloudError(DectException):
    """Operation only supports bare point clouds (no edges or triangles)."""


class DatasetError(DectException):
    """Dataset is empty, single-class, or has labels the model cannot predict."""


class CheckpointError(DectException):
    """Checkpoint file is malformed or of an unsupported version."""


class FileFormatError(DectException):
    """Input file could not be parsed.

    Attributes
    ----------
    path: str
        Offending file.
    line: Optional[int]
        1-based line number, if the problem is tied to a single line.
    """

    def __init__(self, message: str, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += f"{path}"
            if line is not None:
                prefix += f":{line}"
            prefix += ": "
        elif line is not None:
            prefix = f"line {line}: "
        super().__init__(prefix + message)


class DirectionConstraintError(DectException):
    """Constrained directions are not on the unit sphere (or are zero)."""
