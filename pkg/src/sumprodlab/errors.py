"""Exception hierarchy shared by every module."""


class SumProdError(Exception):
    """Base class for all errors raised by sumprodlab."""


class PreconditionViolated(SumProdError, ValueError):
    """An operation was called on input outside its domain."""


class EmptySetError(PreconditionViolated):
    pass


class DivisionByZeroError(PreconditionViolated, ZeroDivisionError):
    pass


class ZeroDilationError(PreconditionViolated):
    pass


class ZeroElementError(PreconditionViolated):
    pass


class NonPositiveElementError(PreconditionViolated):
    pass


class TooSmallError(PreconditionViolated):
    pass


class InvalidParameterError(PreconditionViolated):
    pass


class NonpositiveDenominatorError(PreconditionViolated):
    pass


class InvalidWitnessError(PreconditionViolated):
    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        msg = f"invalid witness: {constraint}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ExactInequalityViolated(SumProdError):
    def __init__(self, spec_id: str, instance: str, detail: str = ""):
        self.spec_id = spec_id
        self.instance = instance
        super().__init__(f"{spec_id} violated on {instance}" + (f": {detail}" if detail else ""))


class BudgetExceeded(SumProdError):
    pass
