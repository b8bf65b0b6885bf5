from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(slots=True)
class SampleRecord:
    """一次迭代的增广数据：事件时刻 (3, n) 与来源向量 (n,)。"""

    chain: int
    iteration: int
    events: np.ndarray
    network: np.ndarray


@dataclass(slots=True)
class ChainInfo:
    chain: int
    model_class: str
    individuals: int
    created_at: int = 0
