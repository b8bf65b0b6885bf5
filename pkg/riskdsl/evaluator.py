from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from core.types import PopulationError, RiskEvaluationError

from .functions import FUNCTIONS
from .nodes import Binary, Call, Covariate, Dist, ExprContext, Indicator, Negate, Node, Number, Param, RiskExpr

if TYPE_CHECKING:
    from population import Population

_COMPARE = {
    "<": operator.lt,
    "<=": operator.le,
    "==": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}

_ARITHMETIC = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
}


@dataclass(frozen=True, slots=True)
class _Scope:
    """subject / source 为 0 下标数组，形状决定结果的广播形状。"""

    params: np.ndarray
    pop: "Population"
    subject: np.ndarray
    source: np.ndarray | None


def _evaluate(node: Node, scope: _Scope) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(node, Number):
        return np.asarray(node.value, dtype=float), np.asarray(False)
    if isinstance(node, Param):
        return np.asarray(scope.params[node.index - 1], dtype=float), np.asarray(False)
    if isinstance(node, Covariate):
        try:
            values = scope.pop.covariate(node.column)
        except PopulationError as exc:
            raise RiskEvaluationError(str(exc)) from exc
        index = scope.source if node.source else scope.subject
        return values[index], np.asarray(False)
    if isinstance(node, Dist):
        if scope.source is None:
            raise RiskEvaluationError("dist() needs a source individual")
        try:
            matrix = scope.pop.distance_array(node.component)
        except PopulationError as exc:
            raise RiskEvaluationError(str(exc)) from exc
        if node.first == "i":
            return matrix[scope.subject, scope.source], np.asarray(False)
        return matrix[scope.source, scope.subject], np.asarray(False)
    if isinstance(node, Negate):
        value, invalid = _evaluate(node.operand, scope)
        return -value, invalid
    if isinstance(node, Binary):
        left, left_invalid = _evaluate(node.left, scope)
        right, right_invalid = _evaluate(node.right, scope)
        invalid = left_invalid | right_invalid
        if node.op == "^":
            value = np.power(left, right)
            invalid = invalid | ((left == 0) & (right == 0)) | (np.isinf(left) & (right == 0))
        else:
            value = _ARITHMETIC[node.op](left, right)
        return value, invalid | np.isnan(value)
    if isinstance(node, Call):
        evaluated = [_evaluate(arg, scope) for arg in node.args]
        invalid = np.asarray(False)
        for _, arg_invalid in evaluated:
            invalid = invalid | arg_invalid
        value, extra = FUNCTIONS[node.name].apply(*(value for value, _ in evaluated))
        return value, invalid | extra | np.isnan(value)
    if isinstance(node, Indicator):
        left, left_invalid = _evaluate(node.left, scope)
        right, right_invalid = _evaluate(node.right, scope)
        value = _COMPARE[node.op](left, right).astype(float)
        return value, left_invalid | right_invalid | np.isnan(left) | np.isnan(right)
    raise TypeError(f"unknown node {node!r}")


def _check_arity(expr: RiskExpr, params: Sequence[float]) -> np.ndarray:
    values = np.asarray(params, dtype=float).reshape(-1)
    if values.size != expr.param_count:
        raise RiskEvaluationError(
            f"wrong arity: {expr.text!r} expects {expr.param_count} parameters, got {values.size}"
        )
    return values


def _run(expr: RiskExpr, scope: _Scope, shape: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(all="ignore"):
        value, invalid = _evaluate(expr.root, scope)
        value = np.broadcast_to(np.asarray(value, dtype=float), shape).copy()
        invalid = np.broadcast_to(invalid, shape) | ~np.isfinite(value)
    return value, invalid


def _raise_for(expr: RiskExpr, value: np.ndarray, invalid: np.ndarray, describe) -> None:
    if invalid.any():
        where = np.unravel_index(int(np.argmax(invalid)), invalid.shape)
        raise RiskEvaluationError(
            f"{expr.text!r} is not a finite number for {describe(where)}"
        )
    negative = value < 0
    if negative.any():
        where = np.unravel_index(int(np.argmax(negative)), negative.shape)
        raise RiskEvaluationError(
            f"{expr.text!r} is negative ({value[where]:g}) for {describe(where)}"
        )


def eval_risk_expr(
    expr: RiskExpr,
    params: Sequence[float],
    pop: "Population",
    i: int,
    k: int | None = None,
) -> float:
    """单点求值；i、k 为从 1 开始的个体编号。"""
    values = _check_arity(expr, params)
    if (k is not None) != (expr.context is ExprContext.PAIR):
        raise RiskEvaluationError(
            f"{expr.context.value} expression {expr.text!r} "
            + ("needs a source individual k" if k is None else "takes no source individual")
        )
    for label, index in (("i", i), ("k", k)):
        if index is not None and not 1 <= index <= pop.n:
            raise RiskEvaluationError(f"individual {label}={index} out of range 1..{pop.n}")
    scope = _Scope(
        params=values,
        pop=pop,
        subject=np.asarray([i - 1]),
        source=None if k is None else np.asarray([k - 1]),
    )
    value, invalid = _run(expr, scope, (1,))
    _raise_for(expr, value, invalid, lambda where: f"individual i={i}" + ("" if k is None else f", k={k}"))
    return float(value[0])


def evaluate_vector(expr: RiskExpr, params: Sequence[float], pop: "Population") -> np.ndarray:
    """对全体个体求值，返回长度 n 的数组。"""
    if expr.context is ExprContext.PAIR:
        raise RiskEvaluationError(f"pair expression {expr.text!r} needs evaluate_matrix")
    values = _check_arity(expr, params)
    scope = _Scope(params=values, pop=pop, subject=np.arange(pop.n), source=None)
    value, invalid = _run(expr, scope, (pop.n,))
    _raise_for(expr, value, invalid, lambda where: f"individual i={where[0] + 1}")
    return value


def evaluate_matrix(expr: RiskExpr, params: Sequence[float], pop: "Population") -> np.ndarray:
    """对全部 (i, k) 求值；行为易感个体 i，列为传染源 k，对角线置 0。"""
    values = _check_arity(expr, params)
    n = pop.n
    scope = _Scope(
        params=values,
        pop=pop,
        subject=np.arange(n)[:, None],
        source=np.arange(n)[None, :],
    )
    value, invalid = _run(expr, scope, (n, n))
    diagonal = np.eye(n, dtype=bool)
    invalid &= ~diagonal
    value[diagonal] = 0.0
    _raise_for(
        expr,
        value,
        invalid,
        lambda where: f"individual i={where[0] + 1}, k={where[1] + 1}",
    )
    return value
