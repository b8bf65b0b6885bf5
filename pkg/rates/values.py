from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from core.types import ModelClass, RiskEvaluationError
from riskdsl import evaluate_matrix, evaluate_vector

if TYPE_CHECKING:
    from model import RiskFunctions, RiskParameters
    from population import Population


@dataclass(frozen=True, slots=True)
class RiskValues:
    """一组参数下六个风险函数在全体个体上的取值。

    pair_rates[i, k] = susceptibility[i] * transmissibility[k] * kernel[i, k]，对角线为 0。
    """

    model_class: ModelClass
    sparks: np.ndarray
    susceptibility: np.ndarray
    transmissibility: np.ndarray
    kernel: np.ndarray
    pair_rates: np.ndarray
    latency: np.ndarray | None = None
    removal: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.sparks)


def _vector(rf: "RiskFunctions", rp: "RiskParameters", pop: "Population", role: str) -> np.ndarray:
    try:
        return evaluate_vector(rf[role], rp.get(role), pop)
    except RiskEvaluationError as exc:
        raise RiskEvaluationError(f"{role}: {exc}") from exc


def compute_risk_values(pop: "Population", rf: "RiskFunctions", rp: "RiskParameters") -> RiskValues:
    model_class = rf.model_class
    sparks = _vector(rf, rp, pop, "sparks")
    susceptibility = _vector(rf, rp, pop, "susceptibility")
    transmissibility = _vector(rf, rp, pop, "transmissibility")
    try:
        kernel = evaluate_matrix(rf["infectivity"], rp.get("infectivity"), pop)
    except RiskEvaluationError as exc:
        raise RiskEvaluationError(f"infectivity: {exc}") from exc
    pair_rates = susceptibility[:, None] * transmissibility[None, :] * kernel
    return RiskValues(
        model_class=model_class,
        sparks=sparks,
        susceptibility=susceptibility,
        transmissibility=transmissibility,
        kernel=kernel,
        pair_rates=pair_rates,
        latency=_vector(rf, rp, pop, "latency") if model_class.has_exposed else None,
        removal=_vector(rf, rp, pop, "removal") if model_class.has_removed else None,
    )
