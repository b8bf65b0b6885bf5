from __future__ import annotations

import json
from pathlib import Path

import pandas as pd

from simulate import write_frame_csv

from .network import TNDistribution

SUMMARY_CSV = "summary.csv"
SUMMARY_JSON = "summary.json"
EDGES_CSV = "network_posterior.csv"
OUT_DEGREE_CSV = "out_degree.csv"
CURVES_CSV = "curves.csv"


def write_summary(summary: pd.DataFrame, directory: str | Path, *, burnin: int, thin: int) -> list[Path]:
    directory = Path(directory)
    csv_path = write_frame_csv(summary, directory / SUMMARY_CSV)
    payload = {
        "burnin": burnin,
        "thin": thin,
        "parameters": summary.to_dict(orient="records"),
    }
    json_path = directory / SUMMARY_JSON
    json_path.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
    return [csv_path, json_path]


def write_network_posterior(distribution: TNDistribution, directory: str | Path) -> list[Path]:
    directory = Path(directory)
    return [
        write_frame_csv(distribution.edges(), directory / EDGES_CSV),
        write_frame_csv(distribution.out_degree_frame(), directory / OUT_DEGREE_CSV),
    ]


def write_curves(curves: pd.DataFrame, directory: str | Path) -> Path:
    return write_frame_csv(curves, Path(directory) / CURVES_CSV)
