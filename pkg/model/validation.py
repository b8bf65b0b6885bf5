from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from core.types import ModelClass, ModelValidationError, RiskEvaluationError
from riskdsl import ExprContext, eval_risk_expr

from .functions import RiskFunctions, required_roles
from .parameters import RiskParameters, RiskPriors

if TYPE_CHECKING:
    from population import Population


@dataclass(slots=True)
class ValidationReport:
    model_class: ModelClass
    problems: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems

    def raise_if_failed(self) -> None:
        if self.problems:
            raise ModelValidationError(self.problems)

    def __str__(self) -> str:
        if self.passed:
            return f"{self.model_class.value}: ok"
        return "\n".join(f"{self.model_class.value}: {problem}" for problem in self.problems)


def validate_model(
    model_class: ModelClass | str,
    rf: RiskFunctions,
    rp: RiskParameters | None = None,
    *,
    priors: RiskPriors | None = None,
    pop: "Population | None" = None,
) -> ValidationReport:
    """角色与类别匹配、参数个数匹配，并在给定人群时对探针个体试算每个表达式。"""
    model_class = ModelClass.parse(model_class)
    report = ValidationReport(model_class)
    required = required_roles(model_class)

    for role in required:
        if rf.get(role) is None:
            report.problems.append(f"missing role: {role}")
    for role in rf.roles:
        if role not in required:
            report.problems.append(f"extra role: {role}")

    if rp is not None:
        _check_counts(report, rf, {role: len(rp.get(role)) for role in rp.roles}, "parameters")
        for label, value in zip(rp.labels(), rp.flatten()):
            if not np.isfinite(value):
                report.problems.append(f"non-finite parameter: {label}")
    if priors is not None:
        _check_counts(report, rf, priors.shape(), "priors")

    if pop is not None and report.passed:
        probe = rp if rp is not None else (priors.probe() if priors is not None else None)
        if probe is not None:
            _probe(report, rf, probe, pop)
    return report


def _check_counts(report: ValidationReport, rf: RiskFunctions, counts: dict[str, int], what: str) -> None:
    for role in rf.roles:
        expected = rf[role].param_count
        got = counts.get(role, 0)
        if got != expected:
            report.problems.append(
                f"arity mismatch: {role} expects {expected} parameters, {what} give {got}"
            )
    for role in counts:
        if rf.get(role) is None and counts[role]:
            report.problems.append(f"extra {what}: {role}")


def _probe(report: ValidationReport, rf: RiskFunctions, rp: RiskParameters, pop: "Population") -> None:
    for role in rf.roles:
        expr = rf[role]
        try:
            if expr.context is ExprContext.PAIR:
                if pop.n >= 2:
                    eval_risk_expr(expr, rp.get(role), pop, 1, 2)
            else:
                eval_risk_expr(expr, rp.get(role), pop, 1)
        except RiskEvaluationError as exc:
            report.problems.append(f"evaluation failed: {role}: {exc}")
