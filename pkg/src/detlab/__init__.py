"""Exact checks on degenerations of the generic determinant."""
from .errors import (BudgetExceeded, ContextError, DetlabError, DomainError, InternalInconsistency,
                     NotDivisible, RetryWithNewPrime, SpecError)
from .groebner import Budget, GroebnerBasis, Ideal, buchberger
from .matrices import MatrixSpec, SymbolicMatrix, build
from .poly import DEGREVLEX, LEX, MonomialOrder, Polynomial, VarTable
from .report import CheckResult, Report, emit
from .scenarios import ScenarioConfig, run

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "ContextError", "DetlabError", "DomainError", "InternalInconsistency", "NotDivisible",
    "RetryWithNewPrime", "SpecError", "Budget", "GroebnerBasis", "Ideal", "buchberger", "MatrixSpec",
    "SymbolicMatrix", "build", "DEGREVLEX", "LEX", "MonomialOrder", "Polynomial", "VarTable",
    "CheckResult", "Report", "emit", "ScenarioConfig", "run",
]
