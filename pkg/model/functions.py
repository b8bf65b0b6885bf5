from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from core.types import ConfigError, ModelClass, RiskExpressionError
from riskdsl import ExprContext, RiskExpr, parse_risk_expr

ROLE_ORDER = (
    "sparks",
    "susceptibility",
    "infectivity",
    "transmissibility",
    "latency",
    "removal",
)

ROLE_ALIASES = {
    "infectivity_kernel": "infectivity",
    "kernel": "infectivity",
    "exogenous": "sparks",
}

PAIR_ROLES = frozenset({"infectivity"})


def canonical_role(name: str) -> str:
    role = ROLE_ALIASES.get(name.strip().lower(), name.strip().lower())
    if role not in ROLE_ORDER:
        raise ConfigError(f"unknown role: {name}")
    return role


def required_roles(model_class: ModelClass) -> tuple[str, ...]:
    roles = ["sparks", "susceptibility", "infectivity", "transmissibility"]
    if model_class.has_exposed:
        roles.append("latency")
    if model_class.has_removed:
        roles.append("removal")
    return tuple(roles)


def role_context(role: str) -> ExprContext:
    return ExprContext.PAIR if role in PAIR_ROLES else ExprContext.SINGLE


def ordered_roles(roles: Iterator[str] | Mapping[str, object]) -> tuple[str, ...]:
    present = set(roles)
    return tuple(role for role in ROLE_ORDER if role in present)


@dataclass(frozen=True, slots=True)
class RiskFunctions:
    model_class: ModelClass
    expressions: Mapping[str, RiskExpr] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "expressions", dict(self.expressions))

    @classmethod
    def from_texts(cls, model_class: ModelClass | str, texts: Mapping[str, str]) -> "RiskFunctions":
        model_class = ModelClass.parse(model_class)
        expressions: dict[str, RiskExpr] = {}
        for name, text in texts.items():
            role = canonical_role(name)
            if role in expressions:
                raise ConfigError(f"duplicate role: {role}")
            try:
                expressions[role] = parse_risk_expr(str(text), role_context(role))
            except RiskExpressionError as exc:
                raise RiskExpressionError(f"{role}: {exc}") from exc
        return cls(model_class, expressions)

    @property
    def roles(self) -> tuple[str, ...]:
        return ordered_roles(self.expressions)

    def __getitem__(self, role: str) -> RiskExpr:
        return self.expressions[role]

    def get(self, role: str) -> RiskExpr | None:
        return self.expressions.get(role)

    def param_counts(self) -> dict[str, int]:
        return {role: self.expressions[role].param_count for role in self.roles}

    def columns(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for role in self.roles:
            seen.update(dict.fromkeys(self.expressions[role].columns()))
        return tuple(seen)

    def uses_distances(self) -> bool:
        return any(self.expressions[role].uses_distances() for role in self.roles)
