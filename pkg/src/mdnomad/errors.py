"""Exception hierarchy shared across the package.

Configuration and usage errors map to CLI exit code 2, numerical failures
to exit code 3.
"""


class MdnomadError(Exception):
    """Base class for all package errors."""


class ConfigurationError(MdnomadError):
    """Invalid configuration value (bad layer sizes, malformed config file)."""


class UsageError(MdnomadError):
    """An operation was called with arguments outside its contract."""


class ShapeError(MdnomadError):
    """Array dimensions inconsistent with the declared network or model."""


class InvalidModelOutputError(MdnomadError):
    """A network head produced non-finite raw mixture parameters."""


class TrainingDivergenceError(MdnomadError):
    """Non-finite loss or gradients during training.

    Carries enough context (epoch, batch, layer) to locate the blow-up.
    """

    def __init__(self, message, epoch=None, batch=None, layer=None):
        super().__init__(message)
        self.epoch = epoch
        self.batch = batch
        self.layer = layer


class SimulationBlowUpError(MdnomadError):
    """A simulated trajectory left the finite range."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class SolverError(MdnomadError):
    """A linear or factorization solver failed to converge."""


class MetricError(MdnomadError):
    """An error metric was asked to operate on degenerate inputs."""


class CheckpointError(MdnomadError):
    """Checkpoint file is malformed; message includes the offending field path."""
