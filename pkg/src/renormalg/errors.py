"""Exception types shared across the package."""


class RenormalgError(Exception):
    """Base class for all errors raised by this package."""


class WindowOverflowError(RenormalgError, ArithmeticError):
    """A Laurent product produced a nonzero term outside the exponent window.

    The computation context must be rebuilt with a larger window; results are
    never silently truncated.
    """

    def __init__(self, exponent, window):
        self.exponent = exponent
        self.window = window
        super().__init__(
            f"term z^{exponent} falls outside window [{-window[0]}, {window[1]}]; "
            "enlarge the Laurent window"
        )


class PreconditionError(RenormalgError, ValueError):
    """An operation was called on input outside its domain."""


class InstanceMismatchError(RenormalgError, ValueError):
    """Operands belong to different algebras, contexts or windows."""
