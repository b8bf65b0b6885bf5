from __future__ import annotations

from typing import Sequence

import numpy as np
import pandas as pd

from core.types import DiseaseState

from .records import Events


def _reached(times: np.ndarray, grid: np.ndarray) -> np.ndarray:
    # NaN 与任何时刻比较都为假，即从未发生
    return times[:, None] <= grid[None, :]


def state_counts(events: Events, grid: Sequence[float]) -> pd.DataFrame:
    """每个网格时刻各状态人数；事件恰好发生在网格点上时计为已发生。"""
    grid = np.asarray(grid, dtype=float)
    model_class = events.model_class
    with np.errstate(invalid="ignore"):
        left_s = _reached(events.acquisition, grid)
        infected = _reached(events.infection, grid)
        removed = _reached(events.removal, grid) if events.removal is not None else np.zeros_like(infected)
    counts = {"time": grid, DiseaseState.S.value: (~left_s).sum(axis=0)}
    if model_class.has_exposed:
        counts[DiseaseState.E.value] = (left_s & ~infected).sum(axis=0)
    counts[DiseaseState.I.value] = (infected & ~removed).sum(axis=0)
    if model_class.has_removed:
        counts[DiseaseState.R.value] = removed.sum(axis=0)
    return pd.DataFrame(counts)


def default_grid(events: Events, start_time: float, points: int = 201) -> np.ndarray:
    finite = [
        events.times(kind)[np.isfinite(events.times(kind))]
        for kind in events.model_class.event_kinds
    ]
    last = max((float(values.max()) for values in finite if values.size), default=start_time)
    end = last if last > start_time else start_time + 1.0
    return np.linspace(start_time, end, max(points, 2))


__all__ = ["default_grid", "state_counts"]
