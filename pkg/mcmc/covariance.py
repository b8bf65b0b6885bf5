from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(slots=True)
class OnlineCovariance:
    """Welford 在线均值 / 散布矩阵，逐个样本更新。"""

    dimension: int
    count: int = 0
    mean: np.ndarray = field(init=False)
    scatter: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.mean = np.zeros(self.dimension)
        self.scatter = np.zeros((self.dimension, self.dimension))

    def update(self, sample: np.ndarray) -> None:
        sample = np.asarray(sample, dtype=float)
        self.count += 1
        delta = sample - self.mean
        self.mean += delta / self.count
        self.scatter += np.outer(delta, sample - self.mean)

    def covariance(self) -> np.ndarray:
        if self.count < 2:
            return np.zeros((self.dimension, self.dimension))
        return self.scatter / (self.count - 1)
