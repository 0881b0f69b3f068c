"""
Solver Error Hierarchy
"""


class BvpError(Exception):
    """Base class for every failure raised by the solver engines"""


class DomainError(BvpError, ValueError):
    """A precondition or invariant of the inputs does not hold"""


class IntegrationError(BvpError):
    """The initial-value integrator could not reach the end of its interval.

    ``position`` is the abscissa where integration stopped. When the failure
    happens inside a shooting solve, ``parameter`` holds the trial initial
    value that produced it.
    """

    def __init__(self, message, position, parameter=None):
        super().__init__(message)
        self.position = position
        self.parameter = parameter

    def __str__(self):
        text = f"{self.args[0]} (r = {self.position!r})"
        if self.parameter is not None:
            text += f" while shooting with p = {self.parameter!r}"
        return text


class StepUnderflowError(IntegrationError):
    """The step controller asked for a step below the configured minimum"""


class StepBudgetError(IntegrationError):
    """The integrator used up its step budget"""


class BracketError(BvpError):
    """The bisection bracket does not straddle the boundary target"""


class SingularMatrixError(BvpError):
    def __init__(self, pivot_index):
        super().__init__(f"Exact zero pivot at index {pivot_index}")
        self.pivot_index = pivot_index


class DivergenceError(BvpError):
    def __init__(self, iteration):
        super().__init__(f"Newton iterate became non-finite at iteration {iteration}")
        self.iteration = iteration


class ConfigurationError(ValueError):
    """A configuration value could not be parsed"""
