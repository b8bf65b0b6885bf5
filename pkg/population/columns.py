from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from core.types import PopulationError


def numeric_column(
    values: pd.Series,
    path: Path,
    column: str,
    *,
    allow_inf: bool = False,
    allow_negative: bool = True,
) -> pd.Series:
    """把字符串列转为 float；第一个非法格按 1 起的行号与列名报告。"""
    numeric = pd.to_numeric(values.str.strip(), errors="coerce").astype(float)
    array = numeric.to_numpy()
    bad = np.isnan(array) if allow_inf else ~np.isfinite(array)
    if not allow_negative:
        bad |= array < 0
    if bad.any():
        row = int(np.argmax(bad))
        raise PopulationError(
            f"non-numeric or out-of-range value {values.iloc[row]!r}",
            path=str(path),
            row=row + 1,
            column=column,
        )
    return numeric
