from .errors import (
    RotaryPXError,
    ParameterDomainError,
    BudgetExceededError,
    VerificationError,
    InternalArithmeticError,
    StructuralError,
    CensusFormatError,
)
from .config import Budgets, CensusOptions
from .params import validate_pr, validate_prime, validate_s

__all__ = [
    "RotaryPXError",
    "ParameterDomainError",
    "BudgetExceededError",
    "VerificationError",
    "InternalArithmeticError",
    "StructuralError",
    "CensusFormatError",
    "Budgets",
    "CensusOptions",
    "validate_pr",
    "validate_prime",
    "validate_s",
]
