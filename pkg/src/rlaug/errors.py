"""Exception types shared across the package."""


class RlaugError(Exception):
    """Base class for all package errors."""


class InvalidShape(RlaugError):
    pass


class InvalidValue(RlaugError):
    pass


class FormatError(RlaugError):
    pass


class InvalidStrength(RlaugError):
    pass


class DiversityTooLarge(RlaugError):
    pass


class NotApplicable(RlaugError):
    pass


class NotPresampled(RlaugError):
    pass


class InvalidSchedule(RlaugError):
    pass


class CounterOverflow(RlaugError):
    pass


class DivergedAtStep(RlaugError):
    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"training diverged at update step {step}")


class ConfigError(RlaugError):
    pass
