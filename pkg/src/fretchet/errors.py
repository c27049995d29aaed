"""Exception hierarchy shared by every module."""


class FretchetError(Exception):
    """Base class for all engine errors."""


class ShapeError(FretchetError, ValueError):
    """A vector does not match the space an operation expects."""


class DimError(FretchetError, IndexError):
    """A basis index or coordinate sequence is out of range."""


class TermTypeError(FretchetError, TypeError):
    """A term is ill-typed.

    ``path`` locates the offending subterm as a sequence of child labels
    from the root.
    """

    def __init__(self, reason, path=()):
        self.reason = reason
        self.path = tuple(path)
        where = "/".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"{reason} (at {where})")

    def under(self, label):
        return type(self)(self.reason, (label,) + self.path)


class MissingAnnotation(TermTypeError):
    """The term may be fine, but its spaces cannot be inferred without
    more annotations."""


class DomainError(FretchetError, ValueError):
    """A primitive was evaluated outside its domain (e.g. ``ln`` of 0)."""


class ParseError(FretchetError, ValueError):
    def __init__(self, line, col, expected, found=None):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        msg = f"{line}:{col}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)
