"""Exception hierarchy shared across the package."""


class JhiError(Exception):
    """Base class for all package errors."""


class EvaluationError(JhiError):
    """A scalar evaluation produced a non-finite or ill-defined result."""


class SeriesDomainError(EvaluationError):
    """An elementary function was applied outside its domain."""


class SingularSeriesError(EvaluationError):
    """Division by a series (or dual) whose leading value is zero."""


class TruncationOrderError(JhiError):
    """A derivative beyond the stored truncation order was requested."""


class InvalidScaleError(JhiError):
    """The scale coordinate t reached zero (the lift is undefined there)."""


class CapabilityError(JhiError):
    """The requested operation needs a capability the object does not have."""


class ConfigError(JhiError):
    """Inconsistent or malformed run configuration."""


class StepError(JhiError):
    """A single integrator step could not be completed."""

    def __init__(self, message, step_index=None):
        super().__init__(message)
        self.step_index = step_index


class NewtonDivergenceError(StepError):
    """The implicit solve failed to reach the requested residual."""

    def __init__(self, message, step_index=None, residual=None):
        super().__init__(message, step_index)
        self.residual = residual


class DomainViolationError(StepError):
    """A step left the validity domain of the bi-realization."""


class DegenerateStepError(StepError):
    """The Newton matrix was numerically singular."""


class IntegrationFailure(JhiError):
    """A run failed mid-trajectory; carries the truncated trajectory."""

    def __init__(self, message, trajectory, step_index, cause=None):
        super().__init__(message)
        self.trajectory = trajectory
        self.step_index = step_index
        self.cause = cause
