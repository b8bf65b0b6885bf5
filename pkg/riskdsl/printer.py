from __future__ import annotations

import math

from .nodes import Binary, Call, Covariate, Dist, Indicator, Negate, Node, Number, Param, RiskExpr


def format_risk_expr(expr: RiskExpr | Node) -> str:
    """输出完全加括号的规范文本，重新解析后得到结构相同的语法树。"""
    node = expr.root if isinstance(expr, RiskExpr) else expr
    return _format(node)


def _format(node: Node) -> str:
    if isinstance(node, Number):
        return "inf" if math.isinf(node.value) else repr(float(node.value))
    if isinstance(node, Param):
        return f"theta[{node.index}]"
    if isinstance(node, Covariate):
        prefix = "risk_src" if node.source else "risk"
        return f"{prefix}.{node.column}"
    if isinstance(node, Dist):
        return f"dist({node.first},{node.second},{node.component})"
    if isinstance(node, Negate):
        return f"(-{_format(node.operand)})"
    if isinstance(node, Binary):
        return f"({_format(node.left)} {node.op} {_format(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(_format(arg) for arg in node.args)})"
    if isinstance(node, Indicator):
        return f"ind({_format(node.left)} {node.op} {_format(node.right)})"
    raise TypeError(f"unknown node {node!r}")
