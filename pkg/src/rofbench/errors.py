"""Exception hierarchy shared by all modules."""


class RofBenchError(Exception):
    """Base class for all package errors."""


class DomainError(RofBenchError, ValueError):
    """An argument lies outside the domain of an operation."""


class ClippingError(DomainError):
    """A directly modulated laser was driven below threshold."""


class ConfigError(RofBenchError):
    """Invalid scenario, parameter file or command-line configuration."""


class NumericalError(RofBenchError, ArithmeticError):
    """A simulation produced non-finite values."""


class StageError(RofBenchError):
    """Failure inside one stage of the link chain."""

    def __init__(self, stage, channel, cause):
        self.stage = stage
        self.channel = channel
        self.cause = cause
        where = f"stage '{stage}'" if channel is None else f"stage '{stage}', channel {channel}"
        super().__init__(f"{where}: {cause}")
