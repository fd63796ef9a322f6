"""Error types shared by every service.

Each error carries a short machine-readable ``code`` next to the human
message; routes turn them into ``{"success": False, "error": ..., "code": ...}``
documents and pick the process exit code from ``exit_code``.
"""


class PoissonError(Exception):
    code = "error"
    exit_code = 1

    def __init__(self, message, code=None, **details):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code
        self.details = details

    def to_dict(self):
        payload = {"success": False, "error": self.message, "code": self.code}
        if self.details:
            payload["details"] = {key: _plain(value) for key, value in self.details.items()}
        return payload


class InputError(PoissonError):
    """Bad arguments: mixed rings, unknown orders, arity problems."""

    code = "input"
    exit_code = 2


class ValidationFailure(PoissonError):
    """A structure violates one of its axioms; ``details`` names the witness."""

    code = "validation"
    exit_code = 1


class SessionError(PoissonError):
    code = "session"
    exit_code = 1

    def __init__(self, message, code=None, line=None, column=None, **details):
        super().__init__(message, code=code, **details)
        self.line = line
        self.column = column
        if self.code == "unreadable":
            self.exit_code = 2

    def to_dict(self):
        payload = super().to_dict()
        if self.line is not None:
            payload["line"] = self.line
            payload["column"] = self.column
        return payload


class InternalInvariantError(PoissonError):
    """Something that exact arithmetic guarantees did not happen."""

    code = "internal"
    exit_code = 3


def _plain(value):
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (int, bool)) or value is None:
        return value
    return str(value)
