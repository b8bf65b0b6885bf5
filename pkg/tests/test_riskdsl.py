from __future__ import annotations

import math

import numpy as np
import pytest

from core.types import RiskEvaluationError, RiskExpressionError
from riskdsl import (
    ExprContext,
    eval_risk_expr,
    evaluate_matrix,
    evaluate_vector,
    format_risk_expr,
    parse_risk_expr,
)


@pytest.fixture
def pop3(make_population):
    return make_population({"x": [0.0, 3.0, 0.0], "y": [0.0, 0.0, 4.0], "age": [10.0, 20.0, 30.0]}, ("euclidean(x, y)",))


def test_precedence_and_parameters(pop3):
    expr = parse_risk_expr("2 + 3 * theta[1]")
    assert expr.param_count == 1
    assert eval_risk_expr(expr, [2.0], pop3, 1) == pytest.approx(8.0)


def test_power_is_right_associative_and_binds_tighter_than_negation(pop3):
    assert eval_risk_expr(parse_risk_expr("2 ^ 3 ^ 2"), [], pop3, 1) == pytest.approx(512.0)
    assert eval_risk_expr(parse_risk_expr("-2 ^ 2 + 10"), [], pop3, 1) == pytest.approx(6.0)
    assert eval_risk_expr(parse_risk_expr("2 ^ -1"), [], pop3, 1) == pytest.approx(0.5)


def test_covariates_and_functions(pop3):
    expr = parse_risk_expr("theta[1] * exp(risk.age / 10) + max(1, 2, 3)")
    assert expr.columns() == ("age",)
    assert eval_risk_expr(expr, [1.0], pop3, 2) == pytest.approx(math.exp(2.0) + 3.0)


def test_pair_expression_reads_distances_and_source(pop3):
    expr = parse_risk_expr("dist(i, k, 1) + risk_src.age", ExprContext.PAIR)
    assert expr.uses_distances()
    assert eval_risk_expr(expr, [], pop3, 1, 2) == pytest.approx(3.0 + 20.0)
    assert eval_risk_expr(expr, [], pop3, 2, 3) == pytest.approx(5.0 + 30.0)


def test_matrix_has_zero_diagonal(pop3):
    expr = parse_risk_expr("dist(k, i, 1) ^ (-theta[1])", ExprContext.PAIR)
    matrix = evaluate_matrix(expr, [1.0], pop3)
    assert matrix.shape == (3, 3)
    assert np.all(np.diag(matrix) == 0.0)
    assert matrix[0, 1] == pytest.approx(1.0 / 3.0)
    assert matrix[2, 0] == pytest.approx(1.0 / 4.0)


def test_vector_matches_pointwise(pop3):
    expr = parse_risk_expr("theta[1] + theta[2] * risk.age")
    vector = evaluate_vector(expr, [1.0, 0.5], pop3)
    for i in range(1, 4):
        assert vector[i - 1] == pytest.approx(eval_risk_expr(expr, [1.0, 0.5], pop3, i))


def test_indicator_comparison(pop3):
    expr = parse_risk_expr("ind(risk.age > 15) * 2 + 1")
    assert evaluate_vector(expr, [], pop3).tolist() == [1.0, 3.0, 3.0]


@pytest.mark.parametrize(
    "text",
    [
        "theta[1] * exp(-theta[2] * risk.age) + 1",
        "-(theta[1] - 2) ^ 2 + max(theta[1], 1)",
        "dist(i, k, 1) ^ (-theta[1]) * risk_src.age",
        "ind(risk.age >= 12) + sqrt(abs(theta[1]))",
    ],
)
def test_printer_reparses_to_same_tree(text):
    context = ExprContext.PAIR if "dist" in text else ExprContext.SINGLE
    expr = parse_risk_expr(text, context)
    again = parse_risk_expr(format_risk_expr(expr), context)
    assert again.root == expr.root


def test_syntax_error_reports_byte_offset():
    with pytest.raises(RiskExpressionError) as excinfo:
        parse_risk_expr("1 + * 2")
    assert excinfo.value.offset == 4


def test_unknown_character_reports_byte_offset():
    with pytest.raises(RiskExpressionError) as excinfo:
        parse_risk_expr("1 $ 2")
    assert excinfo.value.offset == 2


def test_pair_symbols_rejected_in_single_context():
    with pytest.raises(RiskExpressionError, match="pair context"):
        parse_risk_expr("dist(i, k, 1)")


def test_theta_indices_must_be_contiguous():
    with pytest.raises(RiskExpressionError, match="theta"):
        parse_risk_expr("theta[1] + theta[3]")


def test_unknown_function_rejected():
    with pytest.raises(RiskExpressionError, match="unknown function"):
        parse_risk_expr("cosh(1)")


def test_negative_result_raises(pop3):
    with pytest.raises(RiskEvaluationError):
        eval_risk_expr(parse_risk_expr("theta[1] - 5"), [1.0], pop3, 1)


def test_zero_to_negative_power_raises(pop3):
    with pytest.raises(RiskEvaluationError):
        eval_risk_expr(parse_risk_expr("0 ^ (-1)"), [], pop3, 1)


def test_wrong_parameter_count_raises(pop3):
    with pytest.raises(RiskEvaluationError):
        eval_risk_expr(parse_risk_expr("theta[1] + theta[2]"), [1.0], pop3, 1)


def test_zero_times_infinity_raises(pop3):
    with pytest.raises(RiskEvaluationError, match="not a finite number"):
        eval_risk_expr(parse_risk_expr("0 * exp(1000)"), [], pop3, 1)
    assert eval_risk_expr(parse_risk_expr("exp(1000) ^ (-1)"), [], pop3, 1) == 0.0


_EXPONENTS = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


def _random_expr(rng, depth):
    """随机生成 (表达式文本, numpy 直接求值函数)；构造上保证中间结果有限。"""
    if depth == 0 or rng.random() < 0.25:
        leaf = int(rng.integers(3))
        if leaf == 0:
            value = round(float(rng.uniform(0.1, 3.0)), 3)
            return repr(value), lambda theta, age: np.full_like(age, value)
        if leaf == 1:
            index = int(rng.integers(1, 3))
            return f"theta[{index}]", lambda theta, age: np.full_like(age, theta[index - 1])
        return "risk.age", lambda theta, age: age
    kind = int(rng.integers(9))
    left_text, left = _random_expr(rng, depth - 1)
    if kind == 0:
        return f"(-{left_text})", lambda theta, age: -left(theta, age)
    if kind == 1:
        return f"exp(-abs({left_text}))", lambda theta, age: np.exp(-np.abs(left(theta, age)))
    if kind == 2:
        return f"sqrt(abs({left_text}))", lambda theta, age: np.sqrt(np.abs(left(theta, age)))
    if kind == 3:
        power = float(rng.choice(_EXPONENTS))
        return (
            f"(abs({left_text}) + 1) ^ ({power!r})",
            lambda theta, age: np.power(np.abs(left(theta, age)) + 1, power),
        )
    right_text, right = _random_expr(rng, depth - 1)
    if kind == 4:
        return f"({left_text} / (abs({right_text}) + 1))", lambda theta, age: left(theta, age) / (
            np.abs(right(theta, age)) + 1
        )
    if kind == 5:
        name, op = (("min", np.minimum), ("max", np.maximum))[int(rng.integers(2))]
        return f"{name}({left_text}, {right_text})", lambda theta, age: op(left(theta, age), right(theta, age))
    if kind == 6:
        return f"ind({left_text} > {right_text})", lambda theta, age: (left(theta, age) > right(theta, age)).astype(float)
    symbol, op = (("+", np.add), ("-", np.subtract), ("*", np.multiply))[int(rng.integers(3))]
    return f"({left_text} {symbol} {right_text})", lambda theta, age: op(left(theta, age), right(theta, age))


@pytest.mark.parametrize("seed", range(5))
def test_random_expressions_match_numpy_and_reparse(pop3, seed):
    rng = np.random.default_rng(seed)
    age = pop3.covariate("age")
    for _ in range(40):
        body, oracle = _random_expr(rng, 3)
        text = f"{body} + 0 * theta[1] * theta[2]"
        theta = rng.uniform(0.5, 2.0, 2)
        expr = parse_risk_expr(text)
        assert parse_risk_expr(format_risk_expr(expr)).root == expr.root
        expected = oracle(theta, age) + 0 * theta[0] * theta[1]
        if np.any(expected < 0):
            with pytest.raises(RiskEvaluationError, match="negative"):
                evaluate_vector(expr, theta, pop3)
        else:
            assert evaluate_vector(expr, theta, pop3) == pytest.approx(expected, rel=1e-12, abs=1e-300)
