"""随机数流：每条链 / 每个重复模拟一条独立流，种子为 seed + index。"""

from __future__ import annotations

import numpy as np


def stream(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(int(seed) + int(index))
