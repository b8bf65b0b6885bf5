from __future__ import annotations

import numpy as np
import pytest

from core.types import DiseaseState, IllegalTransitionError, ModelClass, Transition
from model import RiskFunctions, RiskParameters
from rates import RateState, apply_event, compute_risk_values, recompute_rates, total_rate
from rates.state import encode_states
from simulate import create_simulation, next_event

SEIR_TEXTS = {
    "sparks": "theta[1] * risk.a",
    "susceptibility": "risk.a",
    "infectivity": "exp(-theta[1] * dist(i, k, 1))",
    "transmissibility": "1 + risk.a",
    "latency": "theta[1]",
    "removal": "theta[1] * risk.a",
}


@pytest.fixture
def seir_model(make_population):
    rng = np.random.default_rng(5)
    pop = make_population(
        {"x": rng.uniform(0, 5, 12).tolist(), "a": rng.uniform(0.5, 1.5, 12).tolist()},
        ("euclidean(x)",),
    )
    rf = RiskFunctions.from_texts(ModelClass.SEIR, SEIR_TEXTS)
    rp = RiskParameters.from_config(
        ModelClass.SEIR,
        {"sparks": [0.05], "infectivity": [0.8], "latency": [0.7], "removal": [0.4]},
    )
    return pop, rf, rp


def _assert_matches_recompute(rate_state):
    transmission, events = recompute_rates(rate_state)
    np.testing.assert_allclose(rate_state.transmission.exogenous, transmission.exogenous, atol=1e-12)
    np.testing.assert_allclose(rate_state.transmission.endogenous, transmission.endogenous, atol=1e-12)
    np.testing.assert_allclose(rate_state.events.stacked(), events.stacked(), atol=1e-12)


def test_risk_values_combine_pair_rates(seir_model):
    pop, rf, rp = seir_model
    values = compute_risk_values(pop, rf, rp)
    a = pop.covariate("a")
    expected = a[:, None] * (1 + a)[None, :] * values.kernel
    np.testing.assert_allclose(values.pair_rates, expected)
    assert np.all(np.diag(values.pair_rates) == 0.0)
    np.testing.assert_allclose(values.removal, 0.4 * a)


def test_initial_rates_follow_states(seir_model):
    pop, rf, rp = seir_model
    values = compute_risk_values(pop, rf, rp)
    states = encode_states(["I", "E"] + ["S"] * 10)
    rate_state = RateState.create(states, values)
    events = rate_state.events
    assert events.se[0] == 0.0 and events.se[1] == 0.0
    assert events.ei[1] == pytest.approx(0.7)
    assert events.ir[0] == pytest.approx(values.removal[0])
    assert events.se[5] == pytest.approx(values.sparks[5] + values.pair_rates[5, 0])
    _assert_matches_recompute(rate_state)


def test_incremental_updates_match_recompute_over_an_epidemic(seir_model):
    pop, rf, rp = seir_model
    sim = create_simulation(pop, rf, rp, {1: "I"}, seed=11, resync_interval=0)
    for _ in range(200):
        drawn = next_event(sim)
        if drawn is None:
            break
        _, transition = drawn
        apply_event(sim.rates, transition)
        _assert_matches_recompute(sim.rates)
    assert total_rate(sim.rates.events) >= 0.0


def test_illegal_transition_rejected(seir_model):
    pop, rf, rp = seir_model
    values = compute_risk_values(pop, rf, rp)
    rate_state = RateState.create(encode_states(["S"] * 12), values)
    with pytest.raises(IllegalTransitionError):
        apply_event(rate_state, Transition(0, DiseaseState.I))


def test_removed_source_stops_contributing(seir_model):
    pop, rf, rp = seir_model
    values = compute_risk_values(pop, rf, rp)
    rate_state = RateState.create(encode_states(["I"] + ["S"] * 11), values)
    apply_event(rate_state, Transition(0, DiseaseState.R))
    np.testing.assert_allclose(rate_state.events.se[1:], values.sparks[1:], atol=1e-12)
    assert rate_state.state_of(0) is DiseaseState.R


def _random_model(model_class, seed, make_population):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 51))
    pop = make_population(
        {
            "x": rng.uniform(0, 6, n).tolist(),
            "y": rng.uniform(0, 6, n).tolist(),
            "a": rng.uniform(0.2, 2.0, n).tolist(),
        },
        ("euclidean(x, y)",),
    )
    texts = {
        "sparks": "theta[1] * risk.a",
        "susceptibility": "risk.a ^ theta[1]",
        "infectivity": "theta[1] * dist(i, k, 1) ^ (-theta[2]) * risk_src.a",
        "transmissibility": "1 + risk.a",
    }
    values = {
        "sparks": [float(rng.uniform(0.001, 0.05))],
        "susceptibility": [float(rng.uniform(0.5, 1.5))],
        "infectivity": [float(rng.uniform(0.5, 3.0)), float(rng.uniform(1.0, 3.0))],
    }
    if model_class.has_exposed:
        texts["latency"] = "theta[1]"
        values["latency"] = [float(rng.uniform(0.2, 1.0))]
    if model_class.has_removed:
        texts["removal"] = "theta[1] * risk.a"
        values["removal"] = [float(rng.uniform(0.1, 0.8))]
    rf = RiskFunctions.from_texts(model_class, texts)
    rp = RiskParameters.from_config(model_class, values)
    seeds = rng.choice(n, size=int(rng.integers(1, 3)), replace=False)
    return pop, rf, rp, {int(index) + 1: "I" for index in seeds}


@pytest.mark.parametrize("model_class", [ModelClass.SEIR, ModelClass.SEI, ModelClass.SIR, ModelClass.SI])
@pytest.mark.parametrize("seed", range(50))
def test_incremental_rates_match_recompute_for_random_models(make_population, model_class, seed):
    pop, rf, rp, starting = _random_model(model_class, seed, make_population)
    sim = create_simulation(pop, rf, rp, starting, seed=seed, resync_interval=0)
    for _ in range(3 * pop.n):
        drawn = next_event(sim)
        if drawn is None:
            break
        apply_event(sim.rates, drawn[1])
        transmission, events = recompute_rates(sim.rates)
        np.testing.assert_allclose(sim.rates.transmission.exogenous, transmission.exogenous, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(sim.rates.transmission.endogenous, transmission.endogenous, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(sim.rates.events.stacked(), events.stacked(), rtol=1e-9, atol=1e-12)
