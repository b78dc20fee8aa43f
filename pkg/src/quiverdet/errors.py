"""Exception types shared by all quiverdet modules."""


class QuiverDetError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QuiverDetError):
    """Invalid input data: malformed quivers, out-of-range cells, bad presets."""


class GuardExceeded(QuiverDetError):
    """A brute-force operation was asked to run past its configured size guard."""


class FacetCapExceeded(QuiverDetError):
    """Facet enumeration grew past the configured cap; fail loudly, not by exhaustion."""


class CrossCheckError(QuiverDetError):
    """Two independent computation routes disagreed.

    This always indicates an implementation bug, never bad user input: the
    routes are mathematically equivalent by construction.
    """
