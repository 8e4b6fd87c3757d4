"""
Tests for engine error types.
"""
from app.errors import (
    BAD_PARAMETERS,
    COUNT_MISMATCH,
    ConsistencyError,
    EngineError,
    InputError,
)


class TestErrors:

    def test_exit_codes(self):
        assert EngineError("X", "m").exit_code == 1
        assert InputError(BAD_PARAMETERS, "m").exit_code == 2
        assert ConsistencyError(COUNT_MISMATCH, "m").exit_code == 3

    def test_to_dict(self):
        e = InputError(BAD_PARAMETERS, "n must be positive", {"field": "n"})
        assert e.to_dict() == {
            "error": {"kind": "BadParameters", "message": "n must be positive", "details": {"field": "n"}}
        }
        assert str(e) == "n must be positive"

    def test_details_default_to_empty(self):
        assert ConsistencyError(COUNT_MISMATCH, "m").details == {}

    def test_repr(self):
        assert repr(InputError(BAD_PARAMETERS, "bad")) == "InputError(kind='BadParameters', message='bad')"

    def test_hierarchy(self):
        assert issubclass(InputError, EngineError)
        assert issubclass(ConsistencyError, EngineError)
