from __future__ import annotations

import math

import numpy as np

from simulate import EXTERNAL, NO_SOURCE, Events, TransmissionNetwork


def check_compatibility(events: Events, network: TransmissionNetwork) -> list[str]:
    """网络与事件时刻是否相容；返回问题列表，空列表表示相容。"""
    problems: list[str] = []
    if network.n != events.n:
        return [f"network has {network.n} individuals, events have {events.n}"]
    acquisition = events.acquisition
    infection = events.infection
    removal = events.removal if events.removal is not None else np.full(events.n, np.nan)
    for individual in range(events.n):
        acquired = acquisition[individual]
        source = network.source_of(individual)
        label = individual + 1
        if np.isnan(acquired) or acquired == -math.inf:
            if source != NO_SOURCE:
                problems.append(f"individual {label} has a source but no in-window infection")
            continue
        if source == NO_SOURCE:
            problems.append(f"individual {label} was infected without a source")
            continue
        if source == EXTERNAL:
            continue
        if source == individual:
            problems.append(f"individual {label} is its own source")
            continue
        start, end = infection[source], removal[source]
        if not (start < acquired) or (not np.isnan(end) and not acquired < end):
            problems.append(
                f"individual {label} infected at {acquired:g} by {source + 1}, "
                f"who is infectious on ({start:g}, {end:g})"
            )
    return problems
