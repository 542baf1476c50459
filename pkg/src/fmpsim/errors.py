"""Exception types shared across the package."""


class FmpError(Exception):
    """Base class for every error raised by this package."""


class DegenerateBox(FmpError):
    """A bounding box has zero or negative extent on some axis."""


class DegenerateReference(FmpError):
    """A reference interval has zero or negative width."""


class ParseError(FmpError):
    """An annotation or configuration document could not be parsed."""

    def __init__(self, message, path=None, line=None, field=None):
        self.path = path
        self.line = line
        self.field = field
        parts = []
        if path is not None:
            parts.append(str(path))
        if line is not None:
            parts.append(f"line {line}")
        if field is not None:
            parts.append(f"field {field!r}")
        prefix = ": ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DuplicateId(FmpError):
    """Two objects in one scene carry the same id."""


class AmbiguousLabel(FmpError):
    """Objects without ids share a label, so label-derived ids collide."""


class InsufficientOverlap(FmpError):
    """Fewer than two objects are present in both scenes."""

    def __init__(self, n0):
        self.n0 = n0
        super().__init__(
            f"only {n0} matched object(s); at least two shared ids are required"
        )


class InternalInconsistency(FmpError):
    """A completed lookup table contradicts one of its seed cells."""
