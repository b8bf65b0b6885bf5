from __future__ import annotations

import math

import numpy as np

from core.logger import logger
from core.types import ObservationError
from model import Distribution

from .records import EventObservations, Events
from .simulation import SimulationState

DEFAULT_FORCE_RETRIES = 1000


def observe(
    sim: SimulationState | Events,
    infection_delay: Distribution,
    removal_delay: Distribution,
    force: bool = False,
    *,
    rng: np.random.Generator | None = None,
    starting_states: np.ndarray | None = None,
    max_retries: int = DEFAULT_FORCE_RETRIES,
) -> EventObservations:
    """在真实时刻上叠加观测延迟。force 时感染观测必须早于真实移除。"""
    if isinstance(sim, SimulationState):
        events = sim.events
        rng = rng if rng is not None else sim.rng
        starting_states = sim.starting_states if starting_states is None else starting_states
    else:
        events = sim
        if rng is None:
            raise ObservationError("observe() on bare events needs an rng")
    if starting_states is None:
        raise ObservationError("observe() on bare events needs starting_states")
    for label, delay in (("infection", infection_delay), ("removal", removal_delay)):
        if delay.support()[0] < 0:
            raise ObservationError(f"{label} delay {delay} has negative support")

    model_class = events.model_class
    n = events.n
    observed_infection = np.full(n, np.nan)
    observed_removal = np.full(n, np.nan) if model_class.has_removed else None
    infection_floor = infection_delay.support()[0]

    for individual in range(n):
        infected_at = events.infection[individual]
        if np.isnan(infected_at):
            continue
        if infected_at == -math.inf:
            observed_infection[individual] = -math.inf
        else:
            removed_at = events.removal[individual] if events.removal is not None else math.nan
            limit = removed_at - infected_at if force and math.isfinite(removed_at) else math.inf
            observed_infection[individual] = infected_at + _draw_delay(
                infection_delay, rng, limit, infection_floor, individual, max_retries
            )
        if observed_removal is not None:
            removed_at = events.removal[individual]
            if removed_at == -math.inf:
                observed_removal[individual] = -math.inf
            elif not np.isnan(removed_at):
                observed_removal[individual] = removed_at + float(removal_delay.sample(rng))

    observed = int(np.sum(np.isfinite(observed_infection)))
    logger.debug(f"生成观测数据: 观测到感染 {observed} 人, force={force}")
    return EventObservations(
        model_class=model_class,
        infection=observed_infection,
        removal=observed_removal,
        initial_states=np.asarray(starting_states, dtype=np.int8).copy(),
    )


def _draw_delay(
    delay: Distribution,
    rng: np.random.Generator,
    limit: float,
    floor: float,
    individual: int,
    max_retries: int,
) -> float:
    if limit == math.inf:
        return float(delay.sample(rng))
    if floor >= limit:
        raise ObservationError(
            f"individual {individual + 1}: infectious period {limit:g} is shorter than the "
            f"smallest infection delay {floor:g}; force cannot be satisfied"
        )
    for _ in range(max_retries):
        value = float(delay.sample(rng))
        if value < limit:
            return value
    raise ObservationError(
        f"individual {individual + 1}: no infection delay below {limit:g} after {max_retries} draws"
    )
