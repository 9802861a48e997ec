"""Exception hierarchy.

Every error raised on purpose by the library derives from ``ArhallError`` and
carries a ``kind`` string used by the command-line front end.
"""


class ArhallError(Exception):
    kind = "error"


class SchemaError(ArhallError, ValueError):
    """Malformed input document or object shape."""

    kind = "schema"


class PreconditionError(ArhallError, ValueError):
    kind = "precondition"


class FieldMismatchError(ArhallError, TypeError):
    """Operands live over different quivers, fields or continuous quivers."""

    kind = "typing"


class AdaptednessError(PreconditionError):
    kind = "adaptedness"


class RefinementConflictError(PreconditionError):
    kind = "refinement-conflict"


class InterpolationError(PreconditionError):
    kind = "interpolation"


class ResourceBudgetError(ArhallError, RuntimeError):
    kind = "resource"


class PolynomialityError(ArhallError, ArithmeticError):
    """Interpolated count failed validation at a held-out prime."""

    kind = "polynomiality"
