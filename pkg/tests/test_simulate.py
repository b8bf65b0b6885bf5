from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from core.types import ModelClass, ObservationError
from likelihood import check_compatibility
from model import Distribution
from simulate import (
    EXTERNAL,
    Events,
    SimulationJob,
    StopCondition,
    create_simulation,
    next_event,
    observe,
    run_replicate,
    sample_source,
    simulate,
    simulate_replicates,
    starting_codes,
    state_counts,
)


def test_waiting_times_and_event_choice_follow_rates(single_source_case):
    rf, rp, pop, _, _ = single_source_case
    sim = create_simulation(pop, rf, rp, ["I", "S"], seed=3)
    deltas = []
    infections = 0
    draws = 20000
    for _ in range(draws):
        delta, transition = next_event(sim)
        deltas.append(delta)
        infections += transition.individual == 1
    assert stats.kstest(deltas, stats.expon(scale=1 / 1.1).cdf).pvalue > 0.01
    assert infections / draws == pytest.approx(1.0 / 1.1, abs=0.01)


def test_source_frequencies_match_competing_rates(competing_sources_case):
    rf, rp, pop, _ = competing_sources_case
    sim = create_simulation(pop, rf, rp, ["I", "I", "S"], seed=8)
    draws = 20000
    sources = np.array([sample_source(sim, 2) for _ in range(draws)])
    assert np.mean(sources == 0) == pytest.approx(0.3, abs=0.015)
    assert np.mean(sources == 1) == pytest.approx(0.6, abs=0.015)
    assert np.mean(sources == EXTERNAL) == pytest.approx(0.1, abs=0.015)


def test_simulated_epidemic_is_consistent(spatial_sir):
    pop, rf, rp, _, _ = spatial_sir
    sim = simulate(pop, rf, rp, {1: "I"}, stop=StopCondition(tmax=30.0), seed=4)
    events, network = sim.events, sim.network
    assert events.problems() == []
    assert check_compatibility(events, network) == []
    finite = events.infection[np.isfinite(events.infection)]
    assert np.all(finite <= 30.0)
    assert events.infection[0] == -math.inf
    assert sim.time <= 30.0


def test_same_seed_reproduces_epidemic(spatial_sir):
    pop, rf, rp, _, _ = spatial_sir
    first = simulate(pop, rf, rp, {1: "I"}, stop=StopCondition(tmax=30.0), seed=21)
    second = simulate(pop, rf, rp, {1: "I"}, stop=StopCondition(tmax=30.0), seed=21)
    assert np.array_equal(first.events.as_array(), second.events.as_array(), equal_nan=True)
    assert np.array_equal(first.network.sources, second.network.sources)


def test_max_iterations_stops_early(spatial_sir):
    pop, rf, rp, _, _ = spatial_sir
    sim = simulate(pop, rf, rp, {1: "I"}, stop=StopCondition(max_iterations=2), seed=4)
    assert sim.iterations <= 2


def test_forced_observations_precede_removal(spatial_sir):
    pop, rf, rp, _, _ = spatial_sir
    sim = simulate(pop, rf, rp, {1: "I"}, stop=StopCondition(tmax=30.0), seed=9)
    observations = observe(sim, Distribution.uniform(0.0, 2.5), Distribution.uniform(0.5, 2.5), force=True)
    events = sim.events
    seen = np.isfinite(observations.infection)
    assert np.array_equal(seen, np.isfinite(events.infection))
    lag = observations.infection[seen] - events.infection[seen]
    assert np.all((lag >= 0.0) & (lag <= 2.5))
    removed = seen & np.isfinite(events.removal)
    assert np.all(observations.infection[removed] < events.removal[removed])
    assert observations.initial_states.tolist() == starting_codes(pop.n, {1: "I"}).tolist()


def _one_case(infected_at: float, removed_at: float) -> Events:
    events = Events.empty(ModelClass.SIR, 1)
    events.infection[0] = infected_at
    events.removal[0] = removed_at
    return events


def test_force_bounds_delay_by_infectious_period():
    rng = np.random.default_rng(2)
    delay = Distribution.uniform(0.5, 2.5)
    for _ in range(200):
        observations = observe(_one_case(1.0, 2.0), delay, delay, force=True, rng=rng, starting_states=starting_codes(1, None))
        assert 1.5 <= observations.infection[0] < 2.0


def test_force_impossible_raises():
    delay = Distribution.uniform(0.5, 2.5)
    with pytest.raises(ObservationError):
        observe(
            _one_case(1.0, 1.3),
            delay,
            delay,
            force=True,
            rng=np.random.default_rng(0),
            starting_states=starting_codes(1, None),
        )


def test_constant_delays_shift_times_exactly():
    events = Events.empty(ModelClass.SIR, 2)
    events.infection[:] = [1.0, np.nan]
    events.removal[:] = [4.0, np.nan]
    observations = observe(
        events,
        Distribution.constant(0.5),
        Distribution.constant(2.0),
        rng=np.random.default_rng(0),
        starting_states=starting_codes(2, None),
    )
    assert observations.infection[0] == pytest.approx(1.5)
    assert observations.removal[0] == pytest.approx(6.0)
    assert np.isnan(observations.infection[1])


def test_state_counts_on_grid():
    events = Events.empty(ModelClass.SIR, 3)
    events.infection[:] = [-math.inf, 1.0, np.nan]
    events.removal[:] = [2.0, 3.0, np.nan]
    counts = state_counts(events, [0.0, 1.0, 2.5, 4.0])
    assert counts["S"].tolist() == [2, 1, 1, 1]
    assert counts["I"].tolist() == [1, 2, 1, 0]
    assert counts["R"].tolist() == [0, 0, 1, 2]


def test_event_problems_detect_bad_order():
    events = Events.empty(ModelClass.SIR, 1)
    events.infection[0] = 3.0
    events.removal[0] = 2.0
    assert events.problems() == ["individual 1: event times not increasing"]


def test_replicates_use_distinct_streams(spatial_sir):
    pop, rf, rp, _, _ = spatial_sir
    jobs = [
        SimulationJob(pop, rf, rp, starting_codes(pop.n, {1: "I"}), StopCondition(tmax=30.0), seed=4, index=index)
        for index in range(2)
    ]
    results = simulate_replicates(jobs)
    assert [result.index for result in results] == [0, 1]
    assert [result.seed for result in results] == [4, 5]
    again = run_replicate(jobs[1])
    assert np.array_equal(again.events.as_array(), results[1].events.as_array(), equal_nan=True)
