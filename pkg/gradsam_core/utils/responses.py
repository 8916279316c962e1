"""Standard response formats for Grad-SAM operations.

Operations return plain dicts so scripts and the CLI can branch on
``success`` without catching exceptions.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from gradsam_core.errors import ConfigError, GradSamError

CONFIG_ERROR = "config"
RUNTIME_ERROR = "runtime"


def success_response(
    message: str,
    outputs: Iterable[Union[str, Path]] = (),
    **fields: Any,
) -> Dict[str, Any]:
    """Create a standardized success response.

    Example:
        >>> response = success_response("Trained 2 epochs", outputs=["model.json"], epochs=2)
        >>> response['success']
        True
        >>> response['epochs']
        2
    """
    result = {
        "success": True,
        "message": message,
        "outputs": [str(Path(p)) for p in outputs],
    }
    result.update(fields)
    return result


def error_response(
    error: str,
    message: Optional[str] = None,
    error_kind: str = RUNTIME_ERROR,
) -> Dict[str, Any]:
    """Create a standardized error response.

    Example:
        >>> response = error_response("ConfigError: k must lie in (0, 1]", error_kind="config")
        >>> response['success']
        False
        >>> response['error_kind']
        'config'
    """
    return {
        "success": False,
        "message": message or error,  # Use error as message if no message provided
        "error": error,
        "error_kind": error_kind,
    }


def exception_response(exc: Exception, message: Optional[str] = None) -> Dict[str, Any]:
    """Error response classified from an exception: config errors vs everything else."""
    kind = CONFIG_ERROR if isinstance(exc, ConfigError) else RUNTIME_ERROR
    detail = f"{type(exc).__name__}: {exc}"
    if message is None:
        message = str(exc) if isinstance(exc, GradSamError) else detail
    return error_response(detail, message=message, error_kind=kind)
