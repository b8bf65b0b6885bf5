from __future__ import annotations

from pathlib import Path

import pytest

from core.config import apply_overrides, load_run_config, safe_bool, safe_int, worker_count
from core.types import ConfigError

ROOT = Path(__file__).resolve().parents[1]


def test_bundled_config_resolves_paths():
    config = load_run_config(ROOT / "configs" / "sir_simulated.toml")
    assert config.model.model_class == "SIR"
    assert Path(config.population.risks).is_absolute()
    assert config.population.risks.endswith("sir_risks.csv")
    assert config.fit.fixed_kernel == "prior"


def test_missing_and_invalid_configs(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_run_config(tmp_path / "absent.toml")
    broken = tmp_path / "broken.toml"
    broken.write_text("seed = [", encoding="utf-8")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_run_config(broken)
    unknown = tmp_path / "unknown.toml"
    unknown.write_text(
        '[population]\nrisks = "r.csv"\n[model]\nclass = "SIR"\nfunctions = {}\ncolour = "red"\n',
        encoding="utf-8",
    )
    with pytest.raises(ConfigError, match="colour"):
        load_run_config(unknown)


def test_json_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(
        '{"population": {"risks": "r.csv"}, "model": {"class": "SI", "functions": {}}}',
        encoding="utf-8",
    )
    config = load_run_config(path)
    assert config.population.risks == str(tmp_path.resolve() / "r.csv")
    assert config.summary.thin == 1


def test_overrides_fall_back_on_bad_values():
    config = load_run_config(ROOT / "configs" / "sir_simulated.toml")
    changed = apply_overrides(config, seed="11", iterations="oops", chains="0", spill="yes")
    assert changed.seed == 11
    assert changed.fit.iterations == config.fit.iterations
    assert changed.fit.chains == 1
    assert changed.fit.spill is True
    assert apply_overrides(config, seed="-4").seed == 0


def test_tmax_override():
    config = load_run_config(ROOT / "configs" / "sir_simulated.toml")
    assert apply_overrides(config, tmax="50").simulate.tmax == 50.0
    assert apply_overrides(config, tmax="inf").simulate.tmax is None
    assert apply_overrides(config, tmax="soon").simulate.tmax == config.simulate.tmax


def test_safe_helpers(monkeypatch):
    assert safe_int("7", 1, max_value=5) == 5
    assert safe_int(None, 3) == 3
    assert safe_bool("off", True) is False
    assert safe_bool("maybe", True) is True
    monkeypatch.setenv("TNILM_WORKERS", "3")
    assert worker_count() == 3
    assert worker_count("0") == 1
