from __future__ import annotations
from typing import Any, Dict, List, Optional


class RotaryPXError(Exception):
    """Base error. Every subclass carries a CLI exit code and a machine-parsable reason."""

    exit_code: int = 1
    reason: str = "error"

    def one_line(self) -> str:
        msg = " ".join(str(self).split())
        return f"error reason={self.reason} message={msg}"


class ParameterDomainError(RotaryPXError, ValueError):
    exit_code = 2
    reason = "parameter_domain"


class CensusFormatError(RotaryPXError, ValueError):
    exit_code = 2
    reason = "census_format"


class BudgetExceededError(RotaryPXError):
    exit_code = 3
    reason = "budget_exceeded"


class VerificationError(RotaryPXError):
    exit_code = 1
    reason = "verification_failed"

    def __init__(self, message: str, report: Optional[List[Dict[str, Any]]] = None) -> None:
        super().__init__(message)
        self.report: List[Dict[str, Any]] = list(report or [])


class InternalArithmeticError(RotaryPXError, ArithmeticError):
    exit_code = 1
    reason = "internal_error"


class StructuralError(RotaryPXError):
    exit_code = 1
    reason = "structural"
