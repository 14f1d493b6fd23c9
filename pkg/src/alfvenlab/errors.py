"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid grid, run configuration, or violated precondition at setup time."""


class DomainError(ValueError):
    """An operation was applied to data outside its mathematical domain."""


class UsageError(ValueError):
    """Mismatched operands (grids, times, parameters) at call time."""


class BlowUpError(RuntimeError):
    """Numerical blow-up detected during time evolution.

    Carries the fast time at which the blow-up was detected.
    """

    def __init__(self, t_star: float, detail: str = ""):
        self.t_star = t_star
        msg = f"numerical blow-up detected at t*={t_star:.6g}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
