"""Tests for operation response helpers."""

from pathlib import Path

from gradsam_core.errors import ConfigError, IntegrityError
from gradsam_core.utils.responses import (
    CONFIG_ERROR,
    RUNTIME_ERROR,
    error_response,
    exception_response,
    success_response,
)


class TestResponses:
    """Test success and error dictionaries."""

    def test_success_carries_fields_and_outputs(self):
        response = success_response("done", outputs=[Path("a") / "b.json"], records=3)
        assert response == {
            "success": True,
            "message": "done",
            "outputs": [str(Path("a") / "b.json")],
            "records": 3,
        }

    def test_error_defaults_message(self):
        response = error_response("boom")
        assert response["message"] == "boom"
        assert response["error_kind"] == RUNTIME_ERROR

    def test_config_errors_classified(self):
        response = exception_response(ConfigError("k must lie in (0, 1]"))
        assert response["error_kind"] == CONFIG_ERROR
        assert response["message"] == "k must lie in (0, 1]"
        assert response["error"] == "ConfigError: k must lie in (0, 1]"

    def test_runtime_errors_classified(self):
        assert exception_response(IntegrityError("bad blob"))["error_kind"] == RUNTIME_ERROR

    def test_unexpected_exception_keeps_type(self):
        response = exception_response(KeyError("x"))
        assert response["error_kind"] == RUNTIME_ERROR
        assert response["message"].startswith("KeyError")
