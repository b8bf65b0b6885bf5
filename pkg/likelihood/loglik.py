from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

from core.types import ConfigError, EventKind, IncompatibleNetworkError
from rates import RiskValues, compute_risk_values
from simulate import EXTERNAL, NO_SOURCE, Events, TransmissionNetwork

from .ordering import EventOrder, order_events

if TYPE_CHECKING:
    from model import RiskFunctions, RiskParameters
    from population import Population

# 每块计算的事件数；提前终止按块检查
BLOCK_SIZE = 256


@dataclass(frozen=True, slots=True)
class LikelihoodConfig:
    early_stop_threshold: float = -math.inf
    collect_transmission_rates: bool = False

    def __post_init__(self) -> None:
        if math.isnan(self.early_stop_threshold) or self.early_stop_threshold > 0:
            raise ConfigError(
                f"early_stop_threshold must be <= 0 or -inf, got {self.early_stop_threshold}"
            )


@dataclass(frozen=True, slots=True)
class ExposureSnapshot:
    """个体离开 S 那一刻的传染速率：各来源的内生速率与外生速率。"""

    endogenous: np.ndarray
    exogenous: float

    @property
    def total(self) -> float:
        return float(self.endogenous.sum() + self.exogenous)


@dataclass(slots=True)
class LikelihoodResult:
    value: float
    terms: np.ndarray
    order: EventOrder | None = None
    snapshots: dict[int, ExposureSnapshot] = field(default_factory=dict)
    stopped_early: bool = False

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def to_frame(self) -> pd.DataFrame:
        """逐事件对数项；提前终止时只含已计算的部分。"""
        columns = ["time", "kind", "individual", "term"]
        if self.order is None or self.terms.size == 0:
            return pd.DataFrame(columns=columns)
        count = self.terms.size
        kinds = {kind.priority: kind.value for kind in EventKind}
        return pd.DataFrame(
            {
                "time": self.order.times[:count],
                "kind": [kinds[int(priority)] for priority in self.order.kinds[:count]],
                "individual": self.order.individuals[:count] + 1,
                "term": self.terms,
            }
        )


_DEFAULT_CONFIG = LikelihoodConfig()


def _state_matrices(order: EventOrder) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """第 p 个事件发生前一刻的 S / I / E 指示矩阵，形状 (m, n)。"""
    m = order.size
    periods = np.arange(m)[:, None]
    model_class = order.model_class
    acquisition = order.acquisition_rank()[None, :]
    infection = order.rank(EventKind.INFECTION)[None, :]
    susceptible = acquisition >= periods
    if model_class.has_removed:
        removal = order.rank(EventKind.REMOVAL)[None, :]
        infectious = (infection < periods) & (removal >= periods)
    else:
        infectious = infection < periods
    exposed = None
    if model_class.has_exposed:
        exposure = order.rank(EventKind.EXPOSURE)[None, :]
        exposed = (exposure < periods) & (infection >= periods)
    return susceptible, infectious, exposed


def _realized_rates(
    values: RiskValues,
    order: EventOrder,
    infectious: np.ndarray,
    network: TransmissionNetwork | None,
) -> np.ndarray:
    model_class = order.model_class
    acquisition_priority = model_class.acquisition_kind.priority
    rates = np.zeros(order.size)
    for p, (kind, individual) in enumerate(zip(order.kinds, order.individuals)):
        if kind == acquisition_priority:
            if network is None:
                rates[p] = values.sparks[individual] + values.pair_rates[individual] @ infectious[p]
                continue
            source = network.source_of(int(individual))
            if source == EXTERNAL:
                rates[p] = values.sparks[individual]
            elif source == NO_SOURCE:
                raise IncompatibleNetworkError(f"individual {individual + 1} was infected without a source")
            elif source == individual:
                raise IncompatibleNetworkError(f"individual {individual + 1} is its own source")
            else:
                rates[p] = values.pair_rates[individual, source] if infectious[p, source] else 0.0
        elif kind == EventKind.INFECTION.priority:
            rates[p] = values.latency[individual]
        else:
            rates[p] = values.removal[individual]
    return rates


def _check_network(events: Events, network: TransmissionNetwork) -> None:
    if network.n != events.n:
        raise IncompatibleNetworkError(f"network has {network.n} individuals, events have {events.n}")
    acquisition = events.acquisition
    outside = np.isnan(acquisition) | (acquisition == -math.inf)
    stray = outside & (network.sources != NO_SOURCE)
    if stray.any():
        individual = int(np.argmax(stray)) + 1
        raise IncompatibleNetworkError(f"individual {individual} has a source but no in-window infection")


def _snapshots(values: RiskValues, order: EventOrder, infectious: np.ndarray) -> dict[int, ExposureSnapshot]:
    acquisition_priority = order.model_class.acquisition_kind.priority
    snapshots: dict[int, ExposureSnapshot] = {}
    for p in np.flatnonzero(order.kinds == acquisition_priority):
        individual = int(order.individuals[p])
        snapshots[individual] = ExposureSnapshot(
            endogenous=values.pair_rates[individual] * infectious[p],
            exogenous=float(values.sparks[individual]),
        )
    return snapshots


def _evaluate(
    values: RiskValues,
    events: Events,
    network: TransmissionNetwork | None,
    cfg: LikelihoodConfig,
    start_time: float,
) -> LikelihoodResult:
    if events.model_class is not values.model_class:
        raise IncompatibleNetworkError(
            f"events are {events.model_class.value}, risk values are {values.model_class.value}"
        )
    if network is not None:
        _check_network(events, network)
    order = order_events(events, start_time)
    m = order.size
    if m == 0:
        return LikelihoodResult(0.0, np.zeros(0), order)

    susceptible, infectious, exposed = _state_matrices(order)
    with np.errstate(divide="ignore"):
        log_rates = np.log(_realized_rates(values, order, infectious, network))
    snapshots = _snapshots(values, order, infectious) if cfg.collect_transmission_rates else {}
    if np.isneginf(log_rates).any():
        return LikelihoodResult(-math.inf, np.zeros(0), order, snapshots, stopped_early=True)

    # 剩余事件对数速率的正部之和：后续项最多能把累计值抬高这么多
    headroom = np.concatenate((np.cumsum(np.maximum(log_rates, 0.0)[::-1])[::-1][1:], [0.0]))
    gaps = order.gaps
    threshold = cfg.early_stop_threshold
    terms = np.zeros(m)
    running = 0.0
    for lo in range(0, m, BLOCK_SIZE):
        block = slice(lo, min(m, lo + BLOCK_SIZE))
        s_block = susceptible[block].astype(float)
        i_block = infectious[block].astype(float)
        total = s_block @ values.sparks + ((s_block @ values.pair_rates) * i_block).sum(axis=1)
        if exposed is not None:
            total += exposed[block].astype(float) @ values.latency
        if values.removal is not None:
            total += i_block @ values.removal
        terms[block] = log_rates[block] - total * gaps[block]
        sums = running + np.cumsum(terms[block])
        if threshold > -math.inf and (sums + headroom[block] < threshold).any():
            return LikelihoodResult(-math.inf, terms[: block.stop], order, snapshots, stopped_early=True)
        running = float(sums[-1])
    return LikelihoodResult(float(terms.sum()), terms, order, snapshots)


def log_likelihood_tnilm(
    rf: "RiskFunctions",
    rp: "RiskParameters",
    pop: "Population",
    events: Events,
    network: TransmissionNetwork,
    cfg: LikelihoodConfig | None = None,
    *,
    start_time: float = 0.0,
    values: RiskValues | None = None,
) -> LikelihoodResult:
    """给定传播网络的事件序列对数似然，获得感染事件只计实际来源的速率。"""
    if values is None:
        values = compute_risk_values(pop, rf, rp)
    return _evaluate(values, events, network, cfg or _DEFAULT_CONFIG, start_time)


def log_likelihood_ilm(
    rf: "RiskFunctions",
    rp: "RiskParameters",
    pop: "Population",
    events: Events,
    cfg: LikelihoodConfig | None = None,
    *,
    start_time: float = 0.0,
    values: RiskValues | None = None,
) -> LikelihoodResult:
    """对全部传播网络边缘化后的对数似然，获得感染事件计全部传染速率之和。"""
    if values is None:
        values = compute_risk_values(pop, rf, rp)
    return _evaluate(values, events, None, cfg or _DEFAULT_CONFIG, start_time)


def tnilm_from_values(
    values: RiskValues,
    events: Events,
    network: TransmissionNetwork,
    cfg: LikelihoodConfig | None = None,
    *,
    start_time: float = 0.0,
) -> LikelihoodResult:
    return _evaluate(values, events, network, cfg or _DEFAULT_CONFIG, start_time)


def ilm_from_values(
    values: RiskValues,
    events: Events,
    cfg: LikelihoodConfig | None = None,
    *,
    start_time: float = 0.0,
) -> LikelihoodResult:
    return _evaluate(values, events, None, cfg or _DEFAULT_CONFIG, start_time)


def exposure_snapshots(values: RiskValues, events: Events, start_time: float = 0.0) -> dict[int, ExposureSnapshot]:
    """只取各感染者离开 S 时的速率快照，不计算似然。"""
    order = order_events(events, start_time)
    if order.size == 0:
        return {}
    _, infectious, _ = _state_matrices(order)
    return _snapshots(values, order, infectious)
