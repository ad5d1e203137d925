"""Exception hierarchy; the CLI maps these onto exit codes."""


class GcxError(Exception):
    """Base class for all library errors."""


class ParseError(GcxError, ValueError):
    """Malformed input text (structure equations, form expressions, manifests)."""


class MalformedPairError(ParseError):
    pass


class IndexRangeError(ParseError):
    pass


class ValidationError(GcxError, ValueError):
    """Input parses but violates a mathematical requirement."""


class JacobiError(ValidationError):
    """Structure constants with ``d o d != 0``."""


class NotAlmostComplexError(ValidationError):
    pass


class InvalidStructureError(ValidationError):
    """Degenerate symplectic form, non-pure spinor, non-orthogonal endomorphism, ..."""


class NotIntegrableError(ValidationError):
    pass


class InternalError(GcxError, AssertionError):
    """A computed result contradicting a theorem or an internal invariant."""
