from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from core.logger import logger
from core.rng import stream
from model import Distribution, RiskFunctions, RiskParameters
from population import Population

from .observe import observe
from .records import EventObservations, Events, TransmissionNetwork
from .simulation import StopCondition, create_simulation, run_simulation


@dataclass(frozen=True, slots=True)
class SimulationJob:
    population: Population
    risk_functions: RiskFunctions
    risk_parameters: RiskParameters
    starting_states: np.ndarray
    stop: StopCondition
    seed: int
    index: int = 0
    start_time: float = 0.0
    resync_interval: int = 1000
    infection_delay: Distribution | None = None
    removal_delay: Distribution | None = None
    force: bool = False


@dataclass(slots=True)
class ReplicateResult:
    index: int
    seed: int
    events: Events
    network: TransmissionNetwork
    observations: EventObservations | None
    iterations: int
    end_time: float


def run_replicate(job: SimulationJob) -> ReplicateResult:
    """单个重复模拟；随机数流为 seed + index，观测延迟沿用同一条流。"""
    rng = stream(job.seed, job.index)
    sim = create_simulation(
        job.population,
        job.risk_functions,
        job.risk_parameters,
        job.starting_states,
        start_time=job.start_time,
        rng=rng,
        resync_interval=job.resync_interval,
    )
    run_simulation(sim, job.stop)
    observations = None
    if job.infection_delay is not None and job.removal_delay is not None:
        observations = observe(sim, job.infection_delay, job.removal_delay, job.force)
    return ReplicateResult(
        index=job.index,
        seed=job.seed + job.index,
        events=sim.events,
        network=sim.network,
        observations=observations,
        iterations=sim.iterations,
        end_time=sim.time,
    )


def simulate_replicates(jobs: list[SimulationJob], workers: int = 1) -> list[ReplicateResult]:
    if workers <= 1 or len(jobs) <= 1:
        results = [run_replicate(job) for job in jobs]
    else:
        logger.info(f"并行运行 {len(jobs)} 个重复模拟, 进程数={workers}")
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as executor:
            results = list(executor.map(run_replicate, jobs))
    return sorted(results, key=lambda result: result.index)
