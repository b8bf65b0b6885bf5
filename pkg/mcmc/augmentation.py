from __future__ import annotations

import math

import numpy as np

from core.types import DiseaseState, EventKind, IncompatibleNetworkError
from model import EventExtents
from simulate import EventObservations, Events, TransmissionNetwork

from .chain import Target


def prestart_events(observations: EventObservations) -> Events:
    """只填窗口前已发生的转移（-inf），其余为 NaN。"""
    model_class = observations.model_class
    events = Events.empty(model_class, observations.n)
    codes = observations.initial_states
    if model_class.has_exposed:
        events.exposure[codes >= DiseaseState.E.code] = -math.inf
    events.infection[codes >= DiseaseState.I.code] = -math.inf
    if model_class.has_removed:
        events.removal[codes >= DiseaseState.R.code] = -math.inf
    return events


def draw_initial_events(
    observations: EventObservations,
    extents: EventExtents,
    start_time: float,
    rng: np.random.Generator,
) -> Events | None:
    """按观测窗口均匀抽取增广时刻，沿个体路径截断；窗口为空时返回 None。"""
    model_class = observations.model_class
    events = prestart_events(observations)
    codes = observations.initial_states
    for individual in range(observations.n):
        observed = observations.infection[individual]
        if math.isfinite(observed):
            exposed_here = model_class.has_exposed and codes[individual] == DiseaseState.S.code
            floor = start_time + (extents.exposure.lo if exposed_here else 0.0)
            lo = max(observed - extents.infection.hi, floor)
            hi = observed - extents.infection.lo
            if not lo < hi:
                return None
            infection = rng.uniform(lo, hi)
            events.infection[individual] = infection
            if exposed_here:
                lo = max(infection - extents.exposure.hi, start_time)
                hi = infection - extents.exposure.lo
                if not lo < hi:
                    return None
                events.exposure[individual] = rng.uniform(lo, hi)
        if observations.removal is None:
            continue
        observed = observations.removal[individual]
        if math.isfinite(observed):
            lo = max(observed - extents.removal.hi, start_time)
            infection = events.infection[individual]
            if math.isfinite(infection):
                lo = max(lo, infection)
            hi = observed - extents.removal.lo
            if not lo < hi:
                return None
            events.removal[individual] = rng.uniform(lo, hi)
    return events


def event_time_bounds(
    target: Target,
    events: Events,
    network: TransmissionNetwork,
    observations: EventObservations,
    extents: EventExtents,
    *,
    start_time: float = -math.inf,
    condition_on_network: bool = True,
) -> tuple[float, float]:
    """目标事件在其余事件与网络固定时允许的区间，不依赖目标自身的当前值。"""
    individual, kind = target
    model_class = events.model_class
    infection = events.get(EventKind.INFECTION, individual)

    if kind is EventKind.EXPOSURE:
        lo = max(infection - extents.exposure.hi, start_time)
        hi = infection - extents.exposure.lo
    else:
        if kind is EventKind.INFECTION:
            observed, extent = observations.infection[individual], extents.infection
        else:
            observed, extent = observations.removal[individual], extents.removal
        lo = max(observed - extent.hi, start_time)
        hi = observed - extent.lo
        if kind is EventKind.INFECTION:
            exposure = events.get(EventKind.EXPOSURE, individual)
            if math.isfinite(exposure):
                lo = max(lo, exposure + extents.exposure.lo)
                hi = min(hi, exposure + extents.exposure.hi)
            removal = events.get(EventKind.REMOVAL, individual)
            if math.isfinite(removal):
                hi = min(hi, removal)
        elif math.isfinite(infection):
            lo = max(lo, infection)

    if condition_on_network:
        if kind is model_class.acquisition_kind:
            source = network.source_of(individual)
            if source >= 0:
                lo = max(lo, events.get(EventKind.INFECTION, source))
                source_removal = events.get(EventKind.REMOVAL, source)
                if not math.isnan(source_removal):
                    hi = min(hi, source_removal)
        if kind is not EventKind.EXPOSURE:
            offspring = network.offspring(individual)
            if offspring.size:
                acquired = events.acquisition[offspring]
                if kind is EventKind.INFECTION:
                    hi = min(hi, float(acquired.min()))
                else:
                    lo = max(lo, float(acquired.max()))

    if not lo < hi:
        raise IncompatibleNetworkError(
            f"empty interval for {kind.value} of individual {individual + 1}: ({lo:g}, {hi:g})"
        )
    return lo, hi
