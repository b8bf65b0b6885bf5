from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from core.models import DistributionSpec
from core.types import ModelClass, ModelValidationError

from .distributions import Distribution
from .functions import canonical_role, ordered_roles


@dataclass(frozen=True, slots=True)
class RiskParameters:
    """每个角色一段参数向量；拼接顺序固定为 ROLE_ORDER。"""

    model_class: ModelClass
    values: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        converted = {
            role: np.asarray(vector, dtype=float).reshape(-1).copy()
            for role, vector in self.values.items()
        }
        object.__setattr__(self, "values", converted)

    @classmethod
    def from_config(
        cls,
        model_class: ModelClass | str,
        mapping: Mapping[str, Sequence[float]],
    ) -> "RiskParameters":
        values = {canonical_role(name): np.asarray(vector, dtype=float) for name, vector in mapping.items()}
        return cls(ModelClass.parse(model_class), values)

    @property
    def roles(self) -> tuple[str, ...]:
        return ordered_roles(self.values)

    @property
    def count(self) -> int:
        return sum(len(self.values[role]) for role in self.roles)

    def __getitem__(self, role: str) -> np.ndarray:
        return self.values[role]

    def get(self, role: str) -> np.ndarray:
        return self.values.get(role, np.zeros(0))

    def flatten(self) -> np.ndarray:
        if not self.roles:
            return np.zeros(0)
        return np.concatenate([self.values[role] for role in self.roles])

    def labels(self) -> list[str]:
        return [f"{role}[{index + 1}]" for role in self.roles for index in range(len(self.values[role]))]

    def with_flat(self, flat: Sequence[float]) -> "RiskParameters":
        """按当前形状把扁平向量拆回各角色。"""
        flat = np.asarray(flat, dtype=float).reshape(-1)
        if flat.size != self.count:
            raise ModelValidationError([f"parameter vector has {flat.size} entries, expected {self.count}"])
        values = {}
        offset = 0
        for role in self.roles:
            size = len(self.values[role])
            values[role] = flat[offset : offset + size]
            offset += size
        return RiskParameters(self.model_class, values)


@dataclass(frozen=True, slots=True)
class RiskPriors:
    model_class: ModelClass
    priors: Mapping[str, tuple[Distribution, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "priors", {role: tuple(items) for role, items in self.priors.items()})

    @classmethod
    def from_config(
        cls,
        model_class: ModelClass | str,
        mapping: Mapping[str, Sequence[DistributionSpec]],
    ) -> "RiskPriors":
        priors = {
            canonical_role(name): tuple(Distribution.from_spec(spec) for spec in specs)
            for name, specs in mapping.items()
        }
        return cls(ModelClass.parse(model_class), priors)

    @property
    def roles(self) -> tuple[str, ...]:
        return ordered_roles(self.priors)

    @property
    def count(self) -> int:
        return sum(len(self.priors[role]) for role in self.roles)

    def flat(self) -> list[Distribution]:
        return [prior for role in self.roles for prior in self.priors[role]]

    def shape(self) -> dict[str, int]:
        return {role: len(self.priors[role]) for role in self.roles}

    def template(self) -> RiskParameters:
        return RiskParameters(
            self.model_class,
            {role: np.zeros(len(self.priors[role])) for role in self.roles},
        )

    def probe(self) -> RiskParameters:
        """各先验的中位数，用于校验阶段的试算。"""
        return self.template().with_flat([prior.median() for prior in self.flat()])


def _check_shapes(rp: RiskParameters, priors: RiskPriors) -> None:
    expected = priors.shape()
    actual = {role: len(rp.values[role]) for role in rp.roles}
    if expected != actual:
        raise ModelValidationError([f"prior shape mismatch: priors {expected}, parameters {actual}"])


def log_prior(rp: RiskParameters, priors: RiskPriors) -> float:
    _check_shapes(rp, priors)
    total = 0.0
    for value, prior in zip(rp.flatten(), priors.flat()):
        total += prior.log_density(value)
        if total == -math.inf:
            return -math.inf
    return total


def sample_priors(priors: RiskPriors, rng: np.random.Generator) -> RiskParameters:
    draws = [prior.sample(rng) for prior in priors.flat()]
    return priors.template().with_flat(draws)
