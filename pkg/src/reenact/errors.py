"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration/shape/usage problems
exit 2, data problems exit 3, numeric aborts exit 4.
"""


class ReenactError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ReenactError):
    """Invalid configuration value or config file.

    May carry multiple problems at once (one per line in the message).
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DataError(ReenactError):
    """Dataset content violates a contract (missing files, bad values)."""


class ShapeError(ReenactError, ValueError):
    """Tensor/image shapes do not line up."""


class CheckpointError(ReenactError):
    """Checkpoint cannot be loaded (version or config incompatibility)."""


class TrainingDiverged(ReenactError):
    """Non-finite loss encountered; carries a diagnostic snapshot."""

    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = dict(snapshot or {})
