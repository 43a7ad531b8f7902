"""Exception hierarchy shared by every stage of the solver."""


class GaussTVError(Exception):
    """Base class. ``stage`` names the pipeline step that failed, when known."""

    stage = None

    def __init__(self, message="", stage=None):
        super().__init__(message)
        if stage is not None:
            self.stage = stage

    def __str__(self):
        msg = super().__str__()
        if self.stage:
            return f"[{self.stage}] {msg}"
        return msg


class InvalidInput(GaussTVError, ValueError):
    """Malformed or out-of-domain input (bad shapes, NaN, not PSD, ...)."""


class OutOfRange(InvalidInput):
    pass


class NegativeValue(InvalidInput):
    pass


class InvalidInterval(InvalidInput):
    pass


class NonpositiveVariance(InvalidInput):
    pass


class NotADistribution(InvalidInput):
    pass


class IdenticalInputs(InvalidInput):
    pass


class DimensionTooLarge(InvalidInput):
    pass


class InstanceTooLarge(InvalidInput):
    pass


class ZeroDelta(InvalidInput):
    pass


class NumericalFailure(GaussTVError, ArithmeticError):
    """Floating-point arithmetic cannot honor a requested accuracy."""


class SingularCovariance(NumericalFailure):
    pass


class ResidualTooLarge(NumericalFailure):
    def __init__(self, actual, budget, what="decomposition", stage=None):
        self.actual = float(actual)
        self.budget = float(budget)
        super().__init__(
            f"{what} residual {self.actual:.3e} exceeds budget {self.budget:.3e}",
            stage=stage,
        )


class BudgetTooTight(NumericalFailure):
    pass
