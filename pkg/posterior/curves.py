from __future__ import annotations

from typing import Sequence

import numpy as np
import pandas as pd

from core.types import ConfigError, DiseaseState
from simulate import state_counts

from .samples import chains_of
from .summary import LOWER_QUANTILE, UPPER_QUANTILE, retained_indices

QUANTILES = (LOWER_QUANTILE, 0.5, UPPER_QUANTILE)
QUANTILE_COLUMNS = ("q2.5", "q50", "q97.5")


def _count_matrix(source, burnin: int, thin: int, grid: np.ndarray) -> tuple[list[str], np.ndarray]:
    chains = chains_of(source)
    if not chains:
        raise ConfigError("no chains to summarize")
    stacks = []
    states: list[str] = []
    for chain in chains:
        for iteration in retained_indices(chain.iterations, burnin, thin):
            counts = state_counts(chain.events_at(iteration), grid)
            states = [column for column in counts.columns if column != "time"]
            stacks.append(counts[states].to_numpy(dtype=float))
    return states, np.stack(stacks)


def _check_grid(time_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(time_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ConfigError("time grid must be a non-empty vector")
    if np.any(np.diff(grid) < 0):
        raise ConfigError("time grid must be sorted")
    return grid


def epidemic_curves(
    source,
    burnin: int,
    thin: int,
    state: DiseaseState | str,
    time_grid: Sequence[float],
) -> pd.DataFrame:
    """某一状态人数在各网格时刻的后验分位数。"""
    state = DiseaseState.parse(state)
    grid = _check_grid(time_grid)
    states, counts = _count_matrix(source, burnin, thin, grid)
    if state.value not in states:
        raise ConfigError(f"state {state.value} is not part of the model")
    values = counts[:, :, states.index(state.value)]
    quantiles = np.quantile(values, QUANTILES, axis=0)
    frame = pd.DataFrame({"time": grid})
    for column, row in zip(QUANTILE_COLUMNS, quantiles):
        frame[column] = row
    return frame


def curve_table(source, burnin: int, thin: int, time_grid: Sequence[float]) -> pd.DataFrame:
    """全部状态的长格式分位数表：time, state, q2.5, q50, q97.5。"""
    grid = _check_grid(time_grid)
    states, counts = _count_matrix(source, burnin, thin, grid)
    frames = []
    for position, state in enumerate(states):
        quantiles = np.quantile(counts[:, :, position], QUANTILES, axis=0)
        frame = pd.DataFrame({"time": grid, "state": state})
        for column, row in zip(QUANTILE_COLUMNS, quantiles):
            frame[column] = row
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def posterior_grid(source, burnin: int, thin: int, start_time: float, points: int = 201) -> np.ndarray:
    """从窗口起点到保留样本中最晚事件时刻的等距网格。"""
    if points < 2:
        raise ConfigError(f"points must be >= 2, got {points}")
    latest = start_time
    for chain in chains_of(source):
        for iteration in retained_indices(chain.iterations, burnin, thin):
            times = chain.events_at(iteration).as_array()
            finite = times[np.isfinite(times)]
            if finite.size:
                latest = max(latest, float(finite.max()))
    if latest <= start_time:
        latest = start_time + 1.0
    return np.linspace(start_time, latest, points)
