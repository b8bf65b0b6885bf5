from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from core.types import DiseaseState, IllegalTransitionError, ModelClass, Transition

from .values import RiskValues, compute_risk_values

if TYPE_CHECKING:
    from model import RiskFunctions, RiskParameters
    from population import Population

S_CODE = DiseaseState.S.code
E_CODE = DiseaseState.E.code
I_CODE = DiseaseState.I.code
R_CODE = DiseaseState.R.code

DEFAULT_RESYNC_INTERVAL = 1000


def encode_states(states: Iterable[DiseaseState | str]) -> np.ndarray:
    return np.asarray([DiseaseState.parse(state).code for state in states], dtype=np.int8)


@dataclass(slots=True)
class TransmissionRates:
    """exogenous[i] = ε*(i)；endogenous[i, k] 为易感 i 被传染源 k 感染的速率。"""

    exogenous: np.ndarray
    endogenous: np.ndarray

    def copy(self) -> "TransmissionRates":
        return TransmissionRates(self.exogenous.copy(), self.endogenous.copy())


@dataclass(slots=True)
class EventRates:
    se: np.ndarray
    ei: np.ndarray | None = None
    ir: np.ndarray | None = None

    def stacked(self) -> np.ndarray:
        """按 [se, ei, ir] 顺序拼接成一个速率向量。"""
        parts = [self.se]
        if self.ei is not None:
            parts.append(self.ei)
        if self.ir is not None:
            parts.append(self.ir)
        return np.concatenate(parts)

    def copy(self) -> "EventRates":
        return EventRates(
            self.se.copy(),
            None if self.ei is None else self.ei.copy(),
            None if self.ir is None else self.ir.copy(),
        )


def check_states(states: np.ndarray, model_class: ModelClass) -> None:
    allowed = {state.code for state in model_class.states}
    illegal = [int(code) for code in np.unique(states) if int(code) not in allowed]
    if illegal:
        names = ", ".join(DiseaseState.from_code(code).value for code in illegal)
        raise IllegalTransitionError(f"state {names} is not part of {model_class.value}")


def rates_from_values(states: np.ndarray, values: RiskValues) -> tuple[TransmissionRates, EventRates]:
    model_class = values.model_class
    check_states(states, model_class)
    susceptible = states == S_CODE
    infectious = states == I_CODE
    exogenous = np.where(susceptible, values.sparks, 0.0)
    endogenous = values.pair_rates * susceptible[:, None] * infectious[None, :]
    se = exogenous + endogenous.sum(axis=1)
    ei = np.where(states == E_CODE, values.latency, 0.0) if model_class.has_exposed else None
    ir = np.where(infectious, values.removal, 0.0) if model_class.has_removed else None
    return TransmissionRates(exogenous, endogenous), EventRates(se, ei, ir)


def initialize_rates(
    states: Sequence[DiseaseState | str] | np.ndarray,
    pop: "Population",
    rf: "RiskFunctions",
    rp: "RiskParameters",
) -> tuple[TransmissionRates, EventRates]:
    codes = states if isinstance(states, np.ndarray) else encode_states(states)
    return rates_from_values(np.asarray(codes, dtype=np.int8), compute_risk_values(pop, rf, rp))


def total_rate(er: EventRates) -> float:
    total = float(er.se.sum())
    if er.ei is not None:
        total += float(er.ei.sum())
    if er.ir is not None:
        total += float(er.ir.sum())
    return total


@dataclass(slots=True)
class RateState:
    """单一所有者的可变速率簿记：状态向量加两组速率。"""

    values: RiskValues
    states: np.ndarray
    transmission: TransmissionRates
    events: EventRates
    resync_interval: int = DEFAULT_RESYNC_INTERVAL
    applied: int = 0

    @classmethod
    def create(
        cls,
        states: np.ndarray,
        values: RiskValues,
        resync_interval: int = DEFAULT_RESYNC_INTERVAL,
    ) -> "RateState":
        codes = np.asarray(states, dtype=np.int8).copy()
        transmission, events = rates_from_values(codes, values)
        return cls(values, codes, transmission, events, resync_interval)

    @property
    def model_class(self) -> ModelClass:
        return self.values.model_class

    def state_of(self, individual: int) -> DiseaseState:
        return DiseaseState.from_code(self.states[individual])


def recompute_rates(rate_state: RateState) -> tuple[TransmissionRates, EventRates]:
    """从零重算，供校验增量更新使用，不修改 rate_state。"""
    return rates_from_values(rate_state.states, rate_state.values)


def _add_infectious_column(rate_state: RateState, k: int) -> None:
    susceptible = rate_state.states == S_CODE
    column = rate_state.values.pair_rates[:, k] * susceptible
    rate_state.transmission.endogenous[:, k] = column
    rate_state.events.se += column
    if rate_state.events.ir is not None:
        rate_state.events.ir[k] = rate_state.values.removal[k]


def apply_event(rate_state: RateState, event: Transition) -> RateState:
    """只更新受影响的行和列。"""
    i = int(event.individual)
    new_state = DiseaseState.parse(event.new_state)
    current = rate_state.state_of(i)
    if rate_state.model_class.next_state(current) is not new_state:
        raise IllegalTransitionError(
            f"{rate_state.model_class.value}: individual {i + 1} cannot move {current.value} -> {new_state.value}"
        )
    tr, er = rate_state.transmission, rate_state.events
    rate_state.states[i] = new_state.code

    if current is DiseaseState.S:
        tr.exogenous[i] = 0.0
        tr.endogenous[i, :] = 0.0
        er.se[i] = 0.0
        if new_state is DiseaseState.E:
            er.ei[i] = rate_state.values.latency[i]
        else:
            _add_infectious_column(rate_state, i)
    elif current is DiseaseState.E:
        er.ei[i] = 0.0
        _add_infectious_column(rate_state, i)
    else:
        er.ir[i] = 0.0
        column = tr.endogenous[:, i].copy()
        tr.endogenous[:, i] = 0.0
        susceptible = rate_state.states == S_CODE
        er.se[susceptible] = np.maximum(er.se[susceptible] - column[susceptible], 0.0)

    rate_state.applied += 1
    if rate_state.resync_interval and rate_state.applied % rate_state.resync_interval == 0:
        rate_state.transmission, rate_state.events = recompute_rates(rate_state)
    return rate_state
