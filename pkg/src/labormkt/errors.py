"""Exception types shared across the package."""


class LaborMarketError(Exception):
    """Base class for all package-specific failures."""


class EmptyPoolError(LaborMarketError):
    """An operation needed positive worker mass and found none."""


class OutOfRangeError(LaborMarketError):
    """An index or parameter fell outside its documented domain."""


class InvalidThresholdError(LaborMarketError):
    """A firing threshold was not a usable real number."""


class DegenerateSystemError(LaborMarketError):
    """An equilibrium system lost one of its sub-markets entirely."""


class NoConvergenceError(LaborMarketError):
    """A solver exhausted its iteration budget.

    Carries the best iterate seen so far (`best`, a dict of named values)
    and the residuals at that iterate, so callers can still report
    diagnostics for a failed run.
    """

    def __init__(self, message, best=None, residuals=None):
        super().__init__(message)
        self.best = best or {}
        self.residuals = residuals or {}


class InfeasibleError(LaborMarketError):
    """A constrained program has an empty feasible set."""


class ConfigError(LaborMarketError):
    """Config text failed to parse or validate.

    `problems` lists every error found, not just the first one.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
