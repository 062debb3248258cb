"""
Domain errors.

Every error names the condition that failed (the value shown to CLI users)
and the process exit code the CLI maps it to.
"""
from typing import Any, Dict


class AbelsError(Exception):
    """Base class; `condition` is the machine-readable failure name."""

    exit_code: int = 1

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        self.detail = detail or condition
        super().__init__(f"{condition}: {self.detail}")

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.condition, "detail": self.detail}


class ValidationError(AbelsError):
    """Bad input: violated preconditions or invalid vectors/matrices."""

    exit_code = 1


class ResourceError(AbelsError):
    """A truncation budget (vertex cap, wall clock) was hit."""

    exit_code = 2


class PropertyFailure(AbelsError):
    """A verification property failed; carries the counterexample."""

    exit_code = 3

    def __init__(self, condition: str, detail: str = "", counterexample: Any = None):
        super().__init__(condition, detail)
        self.counterexample = counterexample

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["counterexample"] = self.counterexample
        return payload


def invalid(condition: str, detail: str = "") -> ValidationError:
    return ValidationError(condition, detail)


def cap_exceeded(count: int, cap: int) -> ResourceError:
    return ResourceError("CapExceeded", f"vertex count {count} exceeds cap {cap}")
