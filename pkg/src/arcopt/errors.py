"""Exception taxonomy shared across the solver stack."""

from __future__ import annotations


class ArcoptError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolationError(ArcoptError):
    """An argument violated a documented precondition (dimension, range, sign)."""


class EvaluationError(ArcoptError):
    """A problem callback produced a non-finite value.

    Carries the residual block ('r_L', 'r_h', 'r_g', 'r_wz', 'r_comp') or
    callback name where the bad value surfaced.
    """

    def __init__(self, block: str, message: str = ""):
        self.block = block
        super().__init__(message or f"non-finite value in block {block!r}")


class FactorizationError(ArcoptError):
    """KKT matrix stayed singular through the whole regularization ladder."""

    def __init__(self, lam: float, message: str = ""):
        self.lam = lam
        super().__init__(message or f"matrix singular even at regularization {lam:g}")


class StepStallError(ArcoptError):
    """Backtracking hit the step floor without satisfying its condition."""

    def __init__(self, condition: str, alpha: float, detail: str = ""):
        self.condition = condition
        self.alpha = alpha
        msg = f"step search stalled at alpha={alpha:.3e} searching for {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InitializationError(ArcoptError):
    """Initial point is not strictly interior: g(x0) <= 0 in some component."""

    def __init__(self, component: int, value: float):
        self.component = component
        self.value = value
        super().__init__(
            f"g(x0)[{component}] = {value:g} <= 0; initial point must satisfy g(x0) > 0"
        )


class UnknownProblemError(ArcoptError, LookupError):
    """Problem name not in the registry; message lists what is available."""

    def __init__(self, name: str, available: list[str]):
        self.name = name
        self.available = list(available)
        super().__init__(
            f"unknown problem {name!r}; available: {', '.join(self.available)}"
        )
