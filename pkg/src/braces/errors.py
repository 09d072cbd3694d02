class BraceError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(BraceError):
    """Malformed tables: wrong shape, out-of-range entries, inconsistent sizes."""


class AxiomError(BraceError):
    """A table or map failed verification.

    ``witness`` holds the offending elements so callers can report them.
    """

    def __init__(self, message, witness=None, report=None):
        super().__init__(message)
        self.witness = witness
        self.report = report


class HypothesisError(BraceError):
    """A construction precondition does not hold.

    ``condition`` names the violated condition (e.g. ``"f_i c_i = c_i^gamma_i f_i"``).
    """

    def __init__(self, condition, message=None):
        super().__init__(message or f"hypothesis violated: {condition}")
        self.condition = condition


class SizeGuardError(BraceError):
    """Requested object exceeds the configured size limit."""
