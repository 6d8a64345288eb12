"""Exception hierarchy shared by every psiest module."""


class PsiEstError(Exception):
    """Base class for all psiest errors."""


class DomainError(PsiEstError, ValueError):
    """An argument lies outside the set on which it is defined."""


class ZeroWeightVector(DomainError):
    """All weights are zero, so the weight vector is not admissible."""


class PositivityViolation(DomainError):
    """A row or column of a weight grid sums to zero."""


class InvalidProbe(DomainError):
    """A perturbed weight vector left the admissible weight set."""


class SolverError(PsiEstError):
    """The sign-change solver could not produce an estimate."""


class NoSignChange(SolverError):
    """No positive-then-negative pair was found on the parameter interval."""


class NonUniqueSignChange(SolverError):
    """The aggregated map vanishes on a set too large to be a single point."""


class MaxIterations(SolverError):
    """Bisection did not reach the requested width within the iteration cap."""


class ExpressionError(PsiEstError, ValueError):
    """Base class for expression parsing and binding problems."""


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ExpressionError):
    def __init__(self, name: str, offset: int | None = None):
        where = "" if offset is None else f" at offset {offset}"
        super().__init__(f"unknown identifier {name!r}{where}")
        self.name = name
        self.offset = offset


class ArityError(ExpressionError):
    pass


class MissingBinding(ExpressionError):
    pass


class EvalDomainError(DomainError):
    """An expression node was evaluated outside its domain."""

    def __init__(self, node: str, value, reason: str):
        super().__init__(f"{reason}: {node} at argument {value!r}")
        self.node = node
        self.value = value
        self.reason = reason


class DataParseError(PsiEstError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyData(PsiEstError):
    pass
