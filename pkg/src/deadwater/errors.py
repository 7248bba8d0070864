"""Exception types shared across the package."""


class DeadwaterError(Exception):
    """Base class for all package-specific errors."""


class DomainError(DeadwaterError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContractError(DeadwaterError, ValueError):
    """Mismatched grids, shapes or otherwise inconsistent inputs."""


class ConfigError(DeadwaterError, ValueError):
    """Invalid or incomplete scenario configuration; names the offending key."""


class CapabilityError(DeadwaterError, RuntimeError):
    """A speed profile cannot provide values needed by the caller."""


class RootFindError(DeadwaterError, RuntimeError):
    """Bracketed root search failed to converge within its iteration cap."""


class DivergenceError(DeadwaterError, RuntimeError):
    """Non-finite values appeared in the evolved spectrum."""

    def __init__(self, step_index: int):
        self.step_index = step_index
        super().__init__(f"non-finite spectrum values at step {step_index}")


class TuningError(DeadwaterError, RuntimeError):
    """Damping search exhausted its iteration budget."""

    def __init__(self, epsilons, measures):
        self.epsilons = list(epsilons)
        self.measures = list(measures)
        super().__init__(
            f"no damping value below tolerance after {len(measures)} iterations "
            f"(last measure {measures[-1]:.3e})"
        )
