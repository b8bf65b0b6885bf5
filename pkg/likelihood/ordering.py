from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from core.types import EventKind, IncompatibleNetworkError, ModelClass
from simulate import Events


@dataclass(slots=True)
class EventOrder:
    """窗口内事件按 (时刻, 类型优先级, 个体) 排成的全序。

    ranks[kind][x] 为个体 x 该类事件在全序中的位置；窗口前发生为 -1，从未发生为 m。
    """

    model_class: ModelClass
    start_time: float
    times: np.ndarray
    kinds: np.ndarray
    individuals: np.ndarray
    ranks: dict[EventKind, np.ndarray]

    @property
    def size(self) -> int:
        return len(self.times)

    @property
    def gaps(self) -> np.ndarray:
        previous = np.concatenate(([self.start_time], self.times[:-1]))
        return self.times - previous

    def rank(self, kind: EventKind) -> np.ndarray:
        return self.ranks[kind]

    def acquisition_rank(self) -> np.ndarray:
        return self.ranks[self.model_class.acquisition_kind]


_KINDS = (EventKind.EXPOSURE, EventKind.INFECTION, EventKind.REMOVAL)


def order_events(events: Events, start_time: float) -> EventOrder:
    model_class = events.model_class
    n = events.n
    times_parts, kind_parts, individual_parts = [], [], []
    for kind in model_class.event_kinds:
        times = events.times(kind)
        early = np.isfinite(times) & (times < start_time)
        if early.any():
            first = int(np.argmax(early)) + 1
            raise IncompatibleNetworkError(
                f"individual {first}: {kind.value} at {times[first - 1]:g} precedes window start {start_time:g}"
            )
        inside = np.flatnonzero(np.isfinite(times))
        times_parts.append(times[inside])
        kind_parts.append(np.full(inside.size, kind.priority, dtype=np.int64))
        individual_parts.append(inside)
    all_times = np.concatenate(times_parts) if times_parts else np.zeros(0)
    all_kinds = np.concatenate(kind_parts) if kind_parts else np.zeros(0, dtype=np.int64)
    all_individuals = np.concatenate(individual_parts) if individual_parts else np.zeros(0, dtype=np.int64)
    order = np.lexsort((all_individuals, all_kinds, all_times))
    all_times, all_kinds, all_individuals = all_times[order], all_kinds[order], all_individuals[order]
    m = all_times.size

    ranks: dict[EventKind, np.ndarray] = {}
    for kind in _KINDS:
        rank = np.full(n, m, dtype=np.int64)
        if kind in model_class.event_kinds:
            rank[events.times(kind) == -math.inf] = -1
            positions = np.flatnonzero(all_kinds == kind.priority)
            rank[all_individuals[positions]] = positions
        ranks[kind] = rank
    result = EventOrder(model_class, float(start_time), all_times, all_kinds, all_individuals, ranks)
    _check_paths(result, events)
    return result


def _check_paths(order: EventOrder, events: Events) -> None:
    """个体路径上后续事件的位置必须在前一事件之后。"""
    kinds = order.model_class.event_kinds
    m = order.size
    for earlier, later in zip(kinds, kinds[1:]):
        first, second = order.rank(earlier), order.rank(later)
        present = second < m
        bad = present & ((first >= second) & ~((first == -1) & (second == -1)))
        bad |= present & (first == m)
        if bad.any():
            individual = int(np.argmax(bad)) + 1
            raise IncompatibleNetworkError(
                f"individual {individual}: {later.value} is not after {earlier.value}"
            )
