from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from core.types import ModelClass  # noqa: E402
from model import Distribution, EventExtents, RiskFunctions, RiskParameters, RiskPriors  # noqa: E402
from population import Population, parse_distance_component  # noqa: E402
from population.distances import build_distances  # noqa: E402
from simulate import EXTERNAL, Events, TransmissionNetwork  # noqa: E402


def _population(columns: dict[str, list[float]], distance_texts: tuple[str, ...] = ()) -> Population:
    risks = pd.DataFrame({name: np.asarray(values, dtype=float) for name, values in columns.items()})
    spec = [parse_distance_component(text) for text in distance_texts]
    return Population(risks=risks, distances=build_distances(spec, risks))


@pytest.fixture
def make_population():
    return _population


@pytest.fixture
def single_source_case():
    """两人 SIR：1 号开始即为 I，2 号在 t=2 被 1 号感染。ε=0，κ=1，移除率 0.1。"""
    pop = _population({"x": [0.0, 1.0]})
    rf = RiskFunctions.from_texts(
        ModelClass.SIR,
        {
            "sparks": "0",
            "susceptibility": "1",
            "infectivity": "1",
            "transmissibility": "1",
            "removal": "0.1",
        },
    )
    rp = RiskParameters(ModelClass.SIR, {})
    events = Events.empty(ModelClass.SIR, 2)
    events.infection[:] = [-math.inf, 2.0]
    network = TransmissionNetwork.empty(2)
    network.set_source(1, 0)
    return rf, rp, pop, events, network


@pytest.fixture
def competing_sources_case():
    """三人 SI：1、2 号开始即为 I，3 号在 t=1 被感染；三种来源速率为 0.1 / 0.3 / 0.6。"""
    pop = _population({"w": [0.3, 0.6, 0.0], "e": [0.0, 0.0, 0.1]})
    rf = RiskFunctions.from_texts(
        ModelClass.SI,
        {
            "sparks": "risk.e",
            "susceptibility": "1",
            "infectivity": "risk_src.w",
            "transmissibility": "1",
        },
    )
    rp = RiskParameters(ModelClass.SI, {})
    events = Events.empty(ModelClass.SI, 3)
    events.infection[:] = [-math.inf, -math.inf, 1.0]
    return rf, rp, pop, events


@pytest.fixture
def spatial_sir():
    """十个个体的小型空间 SIR 模型及其真值参数与先验。"""
    rng = np.random.default_rng(20)
    pop = _population(
        {"x": rng.uniform(0, 4, 10).tolist(), "y": rng.uniform(0, 4, 10).tolist()},
        ("euclidean(x, y)",),
    )
    rf = RiskFunctions.from_texts(
        ModelClass.SIR,
        {
            "sparks": "theta[1]",
            "susceptibility": "1",
            "infectivity": "theta[1] * exp(-dist(i, k, 1))",
            "transmissibility": "1",
            "removal": "theta[1]",
        },
    )
    rp = RiskParameters.from_config(
        ModelClass.SIR, {"sparks": [0.01], "infectivity": [1.0], "removal": [0.3]}
    )
    priors = RiskPriors(
        ModelClass.SIR,
        {
            "sparks": (Distribution.uniform(0.0001, 0.05),),
            "infectivity": (Distribution.uniform(0.1, 3.0),),
            "removal": (Distribution.uniform(0.05, 1.0),),
        },
    )
    extents = EventExtents.build(infection=5.0, removal=5.0)
    return pop, rf, rp, priors, extents


@pytest.fixture
def external_only_network():
    def build(events: Events) -> TransmissionNetwork:
        network = TransmissionNetwork.empty(events.n)
        acquisition = events.acquisition
        for individual in np.flatnonzero(np.isfinite(acquisition)):
            network.set_source(int(individual), EXTERNAL)
        return network

    return build


SMALL_CONFIG = """\
seed = 7

[population]
risks = "risks.csv"
distances = ["euclidean(x, y)"]

[model]
class = "SIR"

[model.functions]
sparks = "theta[1]"
susceptibility = "1"
infectivity = "theta[1] * exp(-dist(i, k, 1))"
transmissibility = "1"
removal = "theta[1]"

[model.parameters]
sparks = [0.01]
infectivity = [1.0]
removal = [0.3]

[model.priors]
sparks = [{{ family = "uniform", a = 0.0001, b = 0.05 }}]
infectivity = [{{ family = "uniform", a = 0.1, b = 3.0 }}]
removal = [{{ family = "uniform", a = 0.05, b = 1.0 }}]

[model.extents]
infection = 5.0
removal = 5.0

[simulate]
starting_states = {{ "1" = "I" }}
tmax = 30.0
infection_delay = {{ family = "uniform", a = 0.0, b = 2.5 }}
removal_delay = {{ family = "uniform", a = 0.5, b = 2.5 }}
force = true

[fit]
observations = "{observations}"
init_attempts = 200
iterations = 20
event_batches = 2
progress_interval = 10

[summary]
burnin = 5
thin = 2

[output]
directory = "{output}"
"""


@pytest.fixture
def small_config(tmp_path):
    """写出小型 SIR 配置与风险文件，返回 (配置路径, 模拟输出目录, 推断输出目录)。"""
    rng = np.random.default_rng(3)
    risks = pd.DataFrame({"x": rng.uniform(0, 4, 10), "y": rng.uniform(0, 4, 10)})
    risks.to_csv(tmp_path / "risks.csv", index=False)
    simulated = tmp_path / "simulated"
    fitted = tmp_path / "fit"
    text = SMALL_CONFIG.format(
        observations=(simulated / "observations.csv").as_posix(),
        output=simulated.as_posix(),
    )
    config_path = tmp_path / "run.toml"
    config_path.write_text(text, encoding="utf-8")
    return config_path, simulated, fitted
