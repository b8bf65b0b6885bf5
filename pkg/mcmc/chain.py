from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from core.types import DiseaseState, EventKind, Extent, ModelClass
from database import SampleRecord, SampleStore
from model import EventExtents, RiskFunctions, RiskParameters, RiskPriors
from population import Population
from rates import RiskValues
from simulate import EventObservations, Events, TransmissionNetwork

from .covariance import OnlineCovariance
from .settings import McmcSettings

Target = tuple[int, EventKind]


@dataclass(slots=True)
class AcceptanceCounter:
    proposed: int = 0
    accepted: int = 0

    def record(self, accepted: bool) -> None:
        self.proposed += 1
        self.accepted += int(accepted)

    @property
    def rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else 0.0


@dataclass(slots=True)
class ChainState:
    """链的当前状态；log_likelihood 始终是以 network 为条件的似然。"""

    parameters: RiskParameters
    values: RiskValues
    events: Events
    network: TransmissionNetwork
    log_prior: float
    log_likelihood: float

    @property
    def log_posterior(self) -> float:
        return self.log_prior + self.log_likelihood


@dataclass(slots=True)
class MarkovChain:
    index: int
    seed: int
    state: ChainState
    rng: np.random.Generator
    fixed_kernel_sd: np.ndarray
    labels: list[str] = field(default_factory=list)
    spill_path: str | None = None
    parameters: list[np.ndarray] = field(default_factory=list)
    log_posteriors: list[float] = field(default_factory=list)
    log_likelihoods: list[float] = field(default_factory=list)
    event_samples: list[np.ndarray] = field(default_factory=list)
    network_samples: list[np.ndarray] = field(default_factory=list)
    covariance: OnlineCovariance | None = None
    acceptance: dict[str, AcceptanceCounter] = field(default_factory=dict)
    pending: list[SampleRecord] = field(default_factory=list)
    elapsed: float = 0.0
    store: SampleStore | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.labels:
            self.labels = self.state.parameters.labels()
        if self.covariance is None:
            self.covariance = OnlineCovariance(self.state.parameters.count)
        for kind in ("events", "parameters"):
            self.acceptance.setdefault(kind, AcceptanceCounter())

    @property
    def model_class(self) -> ModelClass:
        return self.state.events.model_class

    @property
    def n(self) -> int:
        return self.state.events.n

    @property
    def iterations(self) -> int:
        return len(self.log_posteriors) - 1

    def enable_spill(self, path: str) -> None:
        self.spill_path = str(path)
        self.store = SampleStore(self.spill_path)
        self.store.register_chain(self.index, self.model_class.value, self.n)
        for iteration, (events, sources) in enumerate(zip(self.event_samples, self.network_samples)):
            self.pending.append(SampleRecord(self.index, iteration, events, sources))
        self.event_samples.clear()
        self.network_samples.clear()
        self.flush()

    def record(self) -> None:
        """把当前状态追加为一个样本。"""
        state = self.state
        flat = state.parameters.flatten()
        self.parameters.append(flat)
        self.log_posteriors.append(state.log_posterior)
        self.log_likelihoods.append(state.log_likelihood)
        self.covariance.update(flat)
        events = state.events.as_array()
        sources = state.network.sources.copy()
        if self.spill_path is None:
            self.event_samples.append(events)
            self.network_samples.append(sources)
        else:
            self.pending.append(SampleRecord(self.index, self.iterations, events, sources))

    def flush(self) -> int:
        if self.spill_path is None or not self.pending:
            return 0
        written = self.store.add_samples(self.pending)
        self.pending.clear()
        return written

    def close_store(self) -> None:
        """写出未落盘的样本并释放 SQLite 连接；之后读取会重新打开。"""
        self.flush()
        if self.store is not None:
            self.store.close()

    def _record_at(self, iteration: int) -> tuple[np.ndarray, np.ndarray]:
        if not 0 <= iteration <= self.iterations:
            raise IndexError(f"iteration {iteration} outside 0..{self.iterations}")
        if self.spill_path is None:
            return self.event_samples[iteration], self.network_samples[iteration]
        self.flush()
        record = self.store.get_sample(self.index, iteration)
        if record is None:
            raise IndexError(f"iteration {iteration} missing from {self.spill_path}")
        return record.events, record.network

    def events_at(self, iteration: int) -> Events:
        events, _ = self._record_at(iteration)
        return Events.from_array(self.model_class, events)

    def network_at(self, iteration: int) -> TransmissionNetwork:
        _, sources = self._record_at(iteration)
        return TransmissionNetwork(np.array(sources, dtype=np.int64))

    def parameters_at(self, iteration: int) -> RiskParameters:
        return self.state.parameters.with_flat(self.parameters[iteration])

    def parameter_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(np.vstack(self.parameters), columns=self.labels)
        frame.insert(0, "iteration", np.arange(len(self.parameters)))
        frame["log_likelihood"] = self.log_likelihoods
        frame["log_posterior"] = self.log_posteriors
        return frame

    def acceptance_summary(self) -> dict[str, float]:
        return {kind: counter.rate for kind, counter in self.acceptance.items()}


@dataclass(slots=True)
class McmcRun:
    observations: EventObservations
    extents: EventExtents
    population: Population
    risk_functions: RiskFunctions
    priors: RiskPriors
    settings: McmcSettings = field(default_factory=McmcSettings)
    start_time: float = 0.0
    chains: list[MarkovChain] = field(default_factory=list)

    @property
    def model_class(self) -> ModelClass:
        return self.risk_functions.model_class

    @property
    def targets(self) -> list[Target]:
        return augmented_targets(self.observations)

    def without_chains(self) -> "McmcRun":
        return McmcRun(
            self.observations,
            self.extents,
            self.population,
            self.risk_functions,
            self.priors,
            self.settings,
            self.start_time,
        )


def augmented_targets(observations: EventObservations) -> list[Target]:
    """需要增广的事件：窗口内观测到的感染 / 移除，以及对应的暴露。"""
    model_class = observations.model_class
    targets: list[Target] = []
    initial_s = observations.initial_states == DiseaseState.S.code
    infection_seen = np.isfinite(observations.infection)
    for individual in range(observations.n):
        if model_class.has_exposed and infection_seen[individual] and initial_s[individual]:
            targets.append((individual, EventKind.EXPOSURE))
        if infection_seen[individual]:
            targets.append((individual, EventKind.INFECTION))
        if observations.removal is not None and np.isfinite(observations.removal[individual]):
            targets.append((individual, EventKind.REMOVAL))
    return targets


def default_start_time(observations: EventObservations, extents: EventExtents) -> float:
    """未配置窗口起点时用 0.0；观测早到 0.0 放不下其真实时刻时，退到最早可能的真实时刻。"""
    candidates = []
    infection = observations.infection[np.isfinite(observations.infection)]
    if infection.size:
        earliest = float(infection.min())
        for extent in (extents.infection, extents.exposure):
            if isinstance(extent, Extent):
                earliest -= extent.hi
        candidates.append(earliest)
    if observations.removal is not None and isinstance(extents.removal, Extent):
        removal = observations.removal[np.isfinite(observations.removal)]
        if removal.size:
            candidates.append(float(removal.min()) - extents.removal.hi)
    if not candidates:
        return 0.0
    earliest = min(candidates)
    return min(0.0, earliest) if math.isfinite(earliest) else 0.0
