"""Exception types shared across the simulator."""


class ArbisimError(Exception):
    """Base class for all library errors."""


class ConfigError(ArbisimError):
    """Invalid or inconsistent configuration input."""


class ContractError(ArbisimError):
    """A runtime value violated a documented precondition."""


class PlanningError(ArbisimError):
    """Trajectory planning failed (degenerate waypoints, oversized corner radius)."""


class IkError(ArbisimError):
    """Inverse kinematics failed to converge to the requested tolerance."""

    def __init__(self, message: str, best_residual: float = float("nan")):
        super().__init__(message)
        self.best_residual = best_residual
