from .evaluator import eval_risk_expr, evaluate_matrix, evaluate_vector
from .functions import FUNCTIONS, FunctionSpec
from .nodes import ExprContext, RiskExpr
from .parser import parse_risk_expr
from .printer import format_risk_expr

__all__ = [
    "FUNCTIONS",
    "ExprContext",
    "FunctionSpec",
    "RiskExpr",
    "eval_risk_expr",
    "evaluate_matrix",
    "evaluate_vector",
    "format_risk_expr",
    "parse_risk_expr",
]
