"""把公开的 Hagelloch 麻疹数据表转换为风险 CSV 与观测 CSV。

输入是每个儿童一行的导出表，需要列 HN（户号）、CL（班级）、x.loc、y.loc、
tPRO（前驱期日）、tERU（出疹日）、tDEAD（死亡日，可空）。
"""

from __future__ import annotations

import argparse
from pathlib import Path
import sys

import numpy as np
import pandas as pd

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from core.logger import configure_logging, logger  # noqa: E402
from core.types import DiseaseState, ModelClass  # noqa: E402
from simulate import EventObservations, write_frame_csv, write_observations_csv  # noqa: E402

REQUIRED_COLUMNS = ("HN", "CL", "x.loc", "y.loc", "tPRO", "tERU", "tDEAD")
PRESCHOOL = "preschool"
INFECTIOUS_AFTER_RASH = 4.0


def classroom_codes(classes: pd.Series) -> np.ndarray:
    """学前儿童各自一个负编号，使班级指示只在同班学生之间为 1。"""
    labels = classes.fillna(PRESCHOOL).astype(str).str.strip().str.lower()
    codes = pd.factorize(labels)[0].astype(float) + 1.0
    preschool = (labels == PRESCHOOL).to_numpy()
    codes[preschool] = -np.arange(1, preschool.sum() + 1, dtype=float)
    return codes


def observed_removal(rash: pd.Series, death: pd.Series) -> np.ndarray:
    removal = rash.to_numpy(dtype=float) + INFECTIOUS_AFTER_RASH
    death = death.to_numpy(dtype=float)
    earlier = np.isfinite(death) & (death < removal)
    removal[earlier] = death[earlier]
    return removal


def prepare(table: pd.DataFrame) -> tuple[pd.DataFrame, EventObservations]:
    missing = [column for column in REQUIRED_COLUMNS if column not in table.columns]
    if missing:
        raise SystemExit(f"missing columns in input table: {missing}")
    risks = pd.DataFrame(
        {
            "x": table["x.loc"].to_numpy(dtype=float),
            "y": table["y.loc"].to_numpy(dtype=float),
            "household": table["HN"].to_numpy(dtype=float),
            "classroom": classroom_codes(table["CL"]),
        }
    )
    infection = table["tPRO"].to_numpy(dtype=float)
    removal = observed_removal(table["tERU"], table["tDEAD"])
    removal[~np.isfinite(infection)] = np.nan
    observations = EventObservations(
        ModelClass.SEIR,
        infection,
        removal,
        np.full(len(table), DiseaseState.S.code, dtype=np.int8),
    )
    return risks, observations


def main() -> None:
    parser = argparse.ArgumentParser(description="准备 Hagelloch 麻疹数据")
    parser.add_argument("table", help="导出的 Hagelloch 数据表 (CSV)")
    parser.add_argument("--output-dir", default=str(ROOT / "configs" / "data"))
    args = parser.parse_args()
    configure_logging()

    table = pd.read_csv(args.table)
    risks, observations = prepare(table)
    output = Path(args.output_dir)
    write_frame_csv(risks, output / "hagelloch_risks.csv")
    write_observations_csv(observations, output / "hagelloch_observations.csv")
    cases = int(np.isfinite(observations.infection).sum())
    logger.success(f"写出 {len(risks)} 名儿童的风险表与观测, 病例 {cases} 例 -> {output}")


if __name__ == "__main__":
    main()
