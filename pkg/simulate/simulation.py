from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from core.logger import logger
from core.types import ConfigError, DiseaseState, IllegalTransitionError, ModelClass, Transition
from model import RiskFunctions, RiskParameters
from population import Population
from rates import (
    DEFAULT_RESYNC_INTERVAL,
    RateState,
    RiskValues,
    apply_event,
    check_states,
    compute_risk_values,
    encode_states,
)

from .records import EXTERNAL, Events, TransmissionNetwork


class StopCondition(NamedTuple):
    tmax: float | None = None
    max_iterations: int | None = None
    max_wall_time: float | None = None


@dataclass(slots=True)
class SimulationState:
    population: Population
    risk_functions: RiskFunctions
    risk_parameters: RiskParameters
    rates: RateState
    events: Events
    network: TransmissionNetwork
    rng: np.random.Generator
    starting_states: np.ndarray
    start_time: float = 0.0
    time: float = 0.0
    iterations: int = 0

    @property
    def model_class(self) -> ModelClass:
        return self.risk_functions.model_class

    @property
    def states(self) -> np.ndarray:
        return self.rates.states

    @property
    def values(self) -> RiskValues:
        return self.rates.values


def starting_codes(
    n: int,
    starting_states: Sequence[DiseaseState | str] | dict[int, DiseaseState | str] | np.ndarray | None,
) -> np.ndarray:
    """默认全部为 S；字典形式的键是从 1 开始的个体编号。"""
    if starting_states is None:
        return np.full(n, DiseaseState.S.code, dtype=np.int8)
    if isinstance(starting_states, dict):
        codes = np.full(n, DiseaseState.S.code, dtype=np.int8)
        for individual, state in starting_states.items():
            index = int(individual) - 1
            if not 0 <= index < n:
                raise ConfigError(f"starting state for individual {individual} out of range 1..{n}")
            codes[index] = DiseaseState.parse(state).code
        return codes
    if isinstance(starting_states, np.ndarray) and starting_states.dtype.kind in "iu":
        codes = starting_states.astype(np.int8)
    else:
        codes = encode_states(starting_states)
    if len(codes) != n:
        raise ConfigError(f"expected {n} starting states, got {len(codes)}")
    return codes


def _prestart_events(model_class: ModelClass, codes: np.ndarray) -> Events:
    events = Events.empty(model_class, len(codes))
    chain = model_class.states
    for individual, code in enumerate(codes):
        state = DiseaseState.from_code(code)
        for reached in chain[1 : chain.index(state) + 1]:
            events.set(model_class.kind_for(reached), individual, -math.inf)
    return events


def create_simulation(
    pop: Population,
    rf: RiskFunctions,
    rp: RiskParameters,
    starting_states=None,
    *,
    start_time: float = 0.0,
    rng: np.random.Generator | None = None,
    seed: int = 0,
    resync_interval: int = DEFAULT_RESYNC_INTERVAL,
    values: RiskValues | None = None,
) -> SimulationState:
    codes = starting_codes(pop.n, starting_states)
    check_states(codes, rf.model_class)
    values = values if values is not None else compute_risk_values(pop, rf, rp)
    return SimulationState(
        population=pop,
        risk_functions=rf,
        risk_parameters=rp,
        rates=RateState.create(codes, values, resync_interval),
        events=_prestart_events(rf.model_class, codes),
        network=TransmissionNetwork.empty(pop.n),
        rng=rng if rng is not None else np.random.default_rng(seed),
        starting_states=codes,
        start_time=float(start_time),
        time=float(start_time),
    )


def next_event(sim: SimulationState) -> tuple[float, Transition] | None:
    """抽取下一事件的间隔和转移；不修改模拟状态（只消耗随机数流）。"""
    stacked = sim.rates.events.stacked()
    cumulative = np.cumsum(stacked)
    total = float(cumulative[-1]) if cumulative.size else 0.0
    if total <= 0.0:
        return None
    delta = float(sim.rng.exponential(1.0 / total))
    target = sim.rng.random() * total
    cell = int(np.searchsorted(cumulative, target, side="right"))
    if cell >= cumulative.size:
        cell = int(np.flatnonzero(stacked > 0)[-1])
    n = sim.population.n
    block, individual = divmod(cell, n)
    model_class = sim.model_class
    if block == 0:
        new_state = DiseaseState.E if model_class.has_exposed else DiseaseState.I
    elif block == 1 and model_class.has_exposed:
        new_state = DiseaseState.I
    else:
        new_state = DiseaseState.R
    return delta, Transition(individual, new_state)


def sample_source(sim: SimulationState, i: int) -> int:
    """按竞争速率抽取易感个体 i 的传染源；返回 EXTERNAL 或来源下标。"""
    transmission = sim.rates.transmission
    weights = np.append(transmission.endogenous[i], transmission.exogenous[i])
    cumulative = np.cumsum(weights)
    total = float(cumulative[-1])
    if total <= 0.0:
        raise IllegalTransitionError(f"individual {i + 1} has zero exposure rate")
    index = int(np.searchsorted(cumulative, sim.rng.random() * total, side="right"))
    if index >= weights.size:
        index = int(np.flatnonzero(weights > 0)[-1])
    return EXTERNAL if index == sim.population.n else index


def run_simulation(sim: SimulationState, stop: StopCondition = StopCondition()) -> SimulationState:
    started = time.monotonic()
    reason = "no further events"
    logger.debug(f"开始模拟: n={sim.population.n}, 类别={sim.model_class.value}, 起始时间={sim.start_time:g}")
    while True:
        if stop.max_iterations is not None and sim.iterations >= stop.max_iterations:
            reason = "max_iterations"
            break
        if stop.max_wall_time is not None and time.monotonic() - started >= stop.max_wall_time:
            reason = "max_wall_time"
            break
        drawn = next_event(sim)
        if drawn is None:
            break
        delta, transition = drawn
        if stop.tmax is not None and sim.time + delta > stop.tmax:
            sim.time = float(stop.tmax)
            reason = "tmax"
            break
        event_time = sim.time + delta
        kind = sim.model_class.kind_for(transition.new_state)
        if kind is sim.model_class.acquisition_kind:
            sim.network.set_source(transition.individual, sample_source(sim, transition.individual))
        apply_event(sim.rates, transition)
        sim.events.set(kind, transition.individual, event_time)
        sim.time = event_time
        sim.iterations += 1
    logger.debug(f"模拟结束({reason}): 事件数={sim.iterations}, 时间={sim.time:g}")
    return sim


def simulate(
    pop: Population,
    rf: RiskFunctions,
    rp: RiskParameters,
    starting_states=None,
    *,
    stop: StopCondition = StopCondition(),
    start_time: float = 0.0,
    rng: np.random.Generator | None = None,
    seed: int = 0,
    resync_interval: int = DEFAULT_RESYNC_INTERVAL,
) -> SimulationState:
    sim = create_simulation(
        pop,
        rf,
        rp,
        starting_states,
        start_time=start_time,
        rng=rng,
        seed=seed,
        resync_interval=resync_interval,
    )
    return run_simulation(sim, stop)


__all__ = [
    "SimulationState",
    "StopCondition",
    "create_simulation",
    "next_event",
    "run_simulation",
    "sample_source",
    "simulate",
    "starting_codes",
]
