from __future__ import annotations

import importlib.util
import shutil
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from core.config import load_run_config
from core.types import EXIT_OK, ModelClass
from main import main
from posterior import load_chains, network_posterior
from simulate import read_observations_csv

ROOT = Path(__file__).resolve().parents[1]
CONFIG = ROOT / "configs" / "hagelloch_seir.toml"
DATA = ROOT / "configs" / "data"


def _prepare_module():
    spec = importlib.util.spec_from_file_location("prepare_hagelloch", ROOT / "scripts" / "prepare_hagelloch.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def _export_table():
    """与公开导出表同列的 6 名儿童：两户、一个班级、两名学前儿童。"""
    return pd.DataFrame(
        {
            "HN": [1, 1, 2, 2, 3, 4],
            "CL": ["1st class", "1st class", "preschool", "1st class", None, "2nd class"],
            "x.loc": [10.0, 10.0, 40.0, 40.0, 75.0, 120.0],
            "y.loc": [5.0, 5.0, 20.0, 20.0, 60.0, 90.0],
            "tPRO": [1.0, 12.0, 13.0, 14.5, np.nan, 80.0],
            "tERU": [5.0, 16.0, 17.0, 18.0, np.nan, 84.0],
            "tDEAD": [np.nan, 18.0, np.nan, np.nan, np.nan, np.nan],
        }
    )


def test_prepare_applies_observation_rules():
    risks, observations = _prepare_module().prepare(_export_table())
    assert list(risks.columns) == ["x", "y", "household", "classroom"]
    np.testing.assert_allclose(observations.infection[:4], [1.0, 12.0, 13.0, 14.5])
    np.testing.assert_allclose(observations.removal[[0, 1, 5]], [9.0, 18.0, 88.0])
    assert np.isnan(observations.infection[4]) and np.isnan(observations.removal[4])
    classroom = risks["classroom"].to_numpy()
    assert classroom[0] == classroom[1] == classroom[3] > 0
    assert classroom[2] < 0 and classroom[4] < 0 and classroom[2] != classroom[4]
    assert classroom[5] > 0 and classroom[5] != classroom[0]


def test_bundled_config_runs_on_prepared_table(tmp_path):
    module = _prepare_module()
    risks, observations = module.prepare(_export_table())
    config_path = tmp_path / CONFIG.name
    shutil.copy(CONFIG, config_path)
    (tmp_path / "data").mkdir()
    risks.to_csv(tmp_path / "data" / "hagelloch_risks.csv", index=False)
    observations.to_frame().to_csv(tmp_path / "data" / "hagelloch_observations.csv", index=False)

    assert main(["validate", str(config_path)]) == EXIT_OK
    config = load_run_config(config_path)
    assert read_observations_csv(ModelClass.SEIR, config.fit.observations).n == 6
    fitted = tmp_path / "fit"
    assert main(["fit", str(config_path), "--iterations", "5", "--output-dir", str(fitted)]) == EXIT_OK
    assert (fitted / "chain_1" / "parameters.csv").is_file()


@pytest.mark.slow
@pytest.mark.skipif(
    not (DATA / "hagelloch_risks.csv").is_file() or not (DATA / "hagelloch_observations.csv").is_file(),
    reason="Hagelloch data not prepared; run scripts/prepare_hagelloch.py",
)
def test_isolated_late_case_gets_external_source(tmp_path):
    fitted = tmp_path / "hagelloch"
    assert main(["fit", str(CONFIG), "--iterations", "20000", "--output-dir", str(fitted)]) == EXIT_OK
    config = load_run_config(CONFIG)
    observations = read_observations_csv(ModelClass.SEIR, config.fit.observations)
    chains = load_chains(fitted, ModelClass.SEIR, 1, observations.n)
    posterior = network_posterior(chains, burnin=5000, thin=20)
    isolated = int(np.nanargmax(observations.infection))
    assert posterior.external_prob[isolated] > 0.9
