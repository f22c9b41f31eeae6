"""Exception hierarchy shared by the core modules and the CLI"""


class CombpolError(ValueError):
    """Base class; the CLI turns every subclass into exit status 2"""


class FieldError(CombpolError):
    pass


class FieldMismatchError(FieldError):
    pass


class ParseError(CombpolError):
    pass


class DimensionError(CombpolError):
    pass


class BudgetExceededError(CombpolError):
    pass


class PreconditionError(CombpolError):
    pass


class SingularMatrixError(CombpolError):
    pass


class ConsistencyError(CombpolError):
    """An internal cross-check between two independent computations failed"""
