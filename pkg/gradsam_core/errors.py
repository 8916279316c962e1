"""Exception hierarchy for the Grad-SAM toolkit.

Library code raises these; the operations layer turns them into
error responses and the CLI maps ``exit_code`` to a process status.
"""

from typing import Optional


class GradSamError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigError(GradSamError):
    """Invalid configuration, vocabulary, or command usage."""

    exit_code = 2


class ContractError(GradSamError):
    """A documented pre-condition of an operation was violated."""

    pass


class DimensionError(ContractError):
    """Operand shapes do not agree."""

    pass


class NonFiniteError(GradSamError):
    """An operation produced NaN or Inf."""

    pass


class MissingGradientError(GradSamError):
    """A gradient was requested that backward never populated."""

    pass


class TrainingError(GradSamError):
    """Training diverged or could not proceed."""

    def __init__(self, message: str, epoch: Optional[int] = None):
        super().__init__(message if epoch is None else f"epoch {epoch}: {message}")
        self.epoch = epoch


class DatasetError(GradSamError):
    """A dataset file or record failed validation."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class IntegrityError(GradSamError):
    """Stored artifact does not match its recorded size or hash."""

    pass


class EvaluationError(GradSamError):
    """An attribution or prediction failed on a specific sentence."""

    def __init__(self, message: str, sentence_id: Optional[str] = None):
        super().__init__(
            message if sentence_id is None else f"sentence {sentence_id}: {message}"
        )
        self.sentence_id = sentence_id
