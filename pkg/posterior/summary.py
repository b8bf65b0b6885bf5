from __future__ import annotations

import numpy as np
import pandas as pd

from core.types import ConfigError

from .samples import chains_of

LOWER_QUANTILE = 0.025
UPPER_QUANTILE = 0.975
SUMMARY_COLUMNS = ("parameter", "mean", "variance", "ci_lower", "ci_upper")


def retained_indices(iterations: int, burnin: int, thin: int) -> range:
    """保留 burnin 之后每隔 thin 的样本，0 号样本为初值。"""
    if thin < 1:
        raise ConfigError(f"thin must be >= 1, got {thin}")
    if burnin < 0 or burnin >= iterations:
        raise ConfigError(f"burnin {burnin} must be in [0, {iterations}); the run has {iterations} iterations")
    return range(burnin, iterations + 1, thin)


def pooled_parameters(source, burnin: int, thin: int) -> pd.DataFrame:
    chains = chains_of(source)
    if not chains:
        raise ConfigError("no chains to summarize")
    frames = []
    for chain in chains:
        indices = list(retained_indices(chain.iterations, burnin, thin))
        frames.append(chain.parameter_frame()[chain.labels].iloc[indices])
    pooled = pd.concat(frames, ignore_index=True)
    if pooled.empty:
        raise ConfigError("no retained samples")
    return pooled


def summarize(source, burnin: int = 0, thin: int = 1) -> pd.DataFrame:
    """各参数合并所有链保留样本后的均值、无偏方差与等尾 95% 区间。"""
    pooled = pooled_parameters(source, burnin, thin)
    rows = []
    for label in pooled.columns:
        values = pooled[label].to_numpy(dtype=float)
        rows.append(
            {
                "parameter": label,
                "mean": float(np.mean(values)),
                "variance": float(np.var(values, ddof=1)) if values.size > 1 else 0.0,
                "ci_lower": float(np.quantile(values, LOWER_QUANTILE)),
                "ci_upper": float(np.quantile(values, UPPER_QUANTILE)),
            }
        )
    return pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))
