from __future__ import annotations

import numpy as np
import pandas as pd
import pytest

from core.types import InitializationError, ModelClass, ObservationError
from mcmc import McmcSettings, audit_state, create_run, initialize_chain, iterate, start, update_event_times
from model import Distribution, EventExtents, RiskFunctions, RiskParameters, RiskPriors
from posterior import summarize
from population import Population, parse_distance_component
from population.distances import build_distances
from simulate import EventObservations, StopCondition, observe, simulate, starting_codes


def _started_run(spatial_sir, settings):
    pop, rf, rp, priors, extents = spatial_sir
    sim = simulate(pop, rf, rp, {1: "I"}, stop=StopCondition(tmax=30.0), seed=4)
    observations = observe(sim, Distribution.uniform(0.0, 2.5), Distribution.uniform(0.5, 2.5), force=True)
    run = create_run(observations, extents, pop, rf, priors, settings)
    start(run)
    return run


def test_initialization_gives_up_after_bounded_attempts(spatial_sir):
    pop, rf, _, priors, extents = spatial_sir
    infection = np.full(pop.n, np.nan)
    removal = np.full(pop.n, np.nan)
    infection[1], removal[1] = 3.0, 5.0
    observations = EventObservations(ModelClass.SIR, infection, removal, starting_codes(pop.n, None))
    run = create_run(observations, extents, pop, rf, priors, McmcSettings(seed=1), start_time=100.0)
    with pytest.raises(InitializationError, match="after 7 attempts"):
        initialize_chain(run, 7, np.random.default_rng(0))


def test_tiny_event_sigma_leaves_times_in_place(spatial_sir):
    run = _started_run(spatial_sir, McmcSettings(init_attempts=50, seed=3))
    chain = run.chains[0]
    before = chain.state.events.as_array().copy()
    log_likelihood = chain.state.log_likelihood
    update_event_times(chain, run, 1e-9, None, np.random.default_rng(2))
    after = chain.state.events.as_array()
    np.testing.assert_allclose(after, before, rtol=0.0, atol=1e-6, equal_nan=True)
    assert chain.state.log_likelihood == pytest.approx(log_likelihood, rel=1e-6, abs=1e-6)
    assert audit_state(run, chain.state) == []


def test_event_batches_beyond_target_count_are_clamped(spatial_sir):
    run = _started_run(spatial_sir, McmcSettings(init_attempts=50, seed=3))
    chain = run.chains[0]
    counter = chain.acceptance["events"]
    proposed = counter.proposed
    update_event_times(chain, run, 0.5, 10 * len(run.targets) + 7, np.random.default_rng(5))
    assert counter.proposed - proposed == len(run.targets)
    assert audit_state(run, chain.state) == []


TRUE_VALUES = {"sparks[1]": 0.0001, "infectivity[1]": 4.0, "removal[1]": 0.1}


def _recovery_model(seed):
    rng = np.random.default_rng(seed)
    risks = pd.DataFrame(
        {"x": rng.uniform(0, 10, 50), "y": rng.uniform(0, 15, 50), "riskfactor1": rng.gamma(1.0, 1.0, 50)}
    )
    pop = Population(risks=risks, distances=build_distances([parse_distance_component("euclidean(x, y)")], risks))
    rf = RiskFunctions.from_texts(
        ModelClass.SIR,
        {
            "sparks": "theta[1]",
            "susceptibility": "1",
            "infectivity": "dist(k, i, 1) ^ (-theta[1])",
            "transmissibility": "1",
            "removal": "theta[1] * risk.riskfactor1",
        },
    )
    rp = RiskParameters.from_config(ModelClass.SIR, {"sparks": [0.0001], "infectivity": [4.0], "removal": [0.1]})
    return pop, rf, rp


def _observed_outbreak(pop, rf, rp, seed):
    """一次至少 10 例、且强制观测可满足的流行；不满足时换下一个模拟种子。"""
    for offset in range(100):
        sim = simulate(pop, rf, rp, {1: "I"}, stop=StopCondition(tmax=200.0), seed=seed + offset)
        if np.sum(np.isfinite(sim.events.infection)) < 10:
            continue
        try:
            return observe(sim, Distribution.uniform(0.5, 2.5), Distribution.uniform(0.5, 2.5), force=True)
        except ObservationError:
            continue
    raise AssertionError("no usable outbreak in 100 simulation seeds")


@pytest.mark.slow
def test_parameters_recovered_from_simulated_outbreak():
    priors = RiskPriors(
        ModelClass.SIR,
        {
            "sparks": (Distribution.exponential(0.0001),),
            "infectivity": (Distribution.uniform(1.0, 7.0),),
            "removal": (Distribution.uniform(0.0, 1.0),),
        },
    )
    covered = {label: 0 for label in TRUE_VALUES}
    for replicate in range(3):
        pop, rf, rp = _recovery_model(100 + replicate)
        observations = _observed_outbreak(pop, rf, rp, 1000 * (replicate + 1))
        settings = McmcSettings(
            init_attempts=2000,
            event_batches=10,
            fixed_kernel="prior",
            seed=replicate,
            progress_interval=5000,
        )
        run = create_run(
            observations, EventExtents.build(infection=5.0, removal=5.0), pop, rf, priors, settings, start_time=0.0
        )
        start(run)
        iterate(run, 20_000)
        summary = summarize(run, burnin=5000, thin=20).set_index("parameter")
        for label, value in TRUE_VALUES.items():
            covered[label] += summary.loc[label, "ci_lower"] <= value <= summary.loc[label, "ci_upper"]
    assert all(count >= 2 for count in covered.values()), covered
