from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from core.types import ConfigError, IncompatibleNetworkError, ModelClass
from likelihood import (
    LikelihoodConfig,
    check_compatibility,
    exposure_snapshots,
    log_likelihood_ilm,
    log_likelihood_tnilm,
)
from model import RiskParameters
from rates import compute_risk_values
from simulate import EXTERNAL, NO_SOURCE, Events, StopCondition, TransmissionNetwork, simulate


def test_single_transition_by_hand(single_source_case):
    rf, rp, pop, events, network = single_source_case
    tn = log_likelihood_tnilm(rf, rp, pop, events, network)
    ilm = log_likelihood_ilm(rf, rp, pop, events)
    assert tn.value == pytest.approx(-2.2, abs=1e-12)
    assert ilm.value == pytest.approx(-2.2, abs=1e-12)
    assert len(tn.terms) == 1


def test_empty_event_set_has_zero_log_likelihood(single_source_case):
    rf, rp, pop, _, _ = single_source_case
    events = Events.empty(ModelClass.SIR, 2)
    assert log_likelihood_ilm(rf, rp, pop, events).value == 0.0
    assert log_likelihood_tnilm(rf, rp, pop, events, TransmissionNetwork.empty(2)).value == 0.0


def test_source_choice_changes_only_the_infection_term(competing_sources_case):
    rf, rp, pop, events = competing_sources_case
    ilm = log_likelihood_ilm(rf, rp, pop, events).value
    assert ilm == pytest.approx(math.log(1.0) - 1.0)
    total = 0.0
    for source, rate in ((EXTERNAL, 0.1), (0, 0.3), (1, 0.6)):
        network = TransmissionNetwork.empty(3)
        network.set_source(2, source)
        value = log_likelihood_tnilm(rf, rp, pop, events, network).value
        assert value == pytest.approx(math.log(rate) - 1.0)
        total += math.exp(value)
    assert total == pytest.approx(math.exp(ilm), rel=1e-12)


def test_non_infectious_source_gives_negative_infinity(competing_sources_case):
    rf, rp, pop, events = competing_sources_case
    events.infection[1] = 2.0
    network = TransmissionNetwork.empty(3)
    network.set_source(1, EXTERNAL)
    network.set_source(2, 1)
    result = log_likelihood_tnilm(rf, rp, pop, events, network)
    assert result.value == -math.inf
    assert check_compatibility(events, network)


def test_missing_source_raises(competing_sources_case):
    rf, rp, pop, events = competing_sources_case
    with pytest.raises(IncompatibleNetworkError):
        log_likelihood_tnilm(rf, rp, pop, events, TransmissionNetwork.empty(3))


def test_marginalizing_networks_recovers_ilm(spatial_sir):
    pop, rf, _, _, _ = spatial_sir
    small = type(pop)(risks=pop.risks.iloc[:5].reset_index(drop=True), distances=pop.distances[:5, :5].copy())
    rp = RiskParameters.from_config(ModelClass.SIR, {"sparks": [0.05], "infectivity": [0.8], "removal": [0.3]})
    sim = simulate(small, rf, rp, {1: "I"}, stop=StopCondition(tmax=20.0), seed=12)
    events = sim.events
    infectees = [int(i) for i in np.flatnonzero(np.isfinite(events.infection))]
    choices = [[EXTERNAL] + [k for k in range(small.n) if k != i] for i in infectees]
    ilm = log_likelihood_ilm(rf, rp, small, events).value
    total = 0.0
    for assignment in itertools.product(*choices):
        network = TransmissionNetwork.empty(small.n)
        for infectee, source in zip(infectees, assignment):
            network.set_source(infectee, source)
        total += math.exp(log_likelihood_tnilm(rf, rp, small, events, network).value)
    assert math.log(total) == pytest.approx(ilm, abs=1e-9)


def test_simulated_network_matches_ilm_bound(spatial_sir):
    pop, rf, rp, _, _ = spatial_sir
    sim = simulate(pop, rf, rp, {1: "I"}, stop=StopCondition(tmax=30.0), seed=4)
    tn = log_likelihood_tnilm(rf, rp, pop, sim.events, sim.network).value
    ilm = log_likelihood_ilm(rf, rp, pop, sim.events).value
    assert math.isfinite(tn)
    assert tn <= ilm + 1e-9


def test_early_stop_threshold(single_source_case):
    rf, rp, pop, events, network = single_source_case
    stopped = log_likelihood_tnilm(rf, rp, pop, events, network, LikelihoodConfig(early_stop_threshold=-1.0))
    assert stopped.value == -math.inf
    assert stopped.stopped_early
    kept = log_likelihood_tnilm(rf, rp, pop, events, network, LikelihoodConfig(early_stop_threshold=-3.0))
    assert kept.value == pytest.approx(-2.2)
    assert not kept.stopped_early


def test_threshold_must_not_be_positive():
    with pytest.raises(ConfigError):
        LikelihoodConfig(early_stop_threshold=1.0)


def test_start_time_shifts_first_gap(single_source_case):
    rf, rp, pop, events, network = single_source_case
    result = log_likelihood_tnilm(rf, rp, pop, events, network, start_time=1.0)
    assert result.value == pytest.approx(-1.1)


def test_exposure_snapshots_record_competing_rates(competing_sources_case):
    rf, rp, pop, events = competing_sources_case
    snapshots = exposure_snapshots(compute_risk_values(pop, rf, rp), events)
    snapshot = snapshots[2]
    assert snapshot.endogenous.tolist() == pytest.approx([0.3, 0.6, 0.0])
    assert snapshot.exogenous == pytest.approx(0.1)
    assert snapshot.total == pytest.approx(1.0)


def test_compatibility_reports_stray_sources():
    events = Events.empty(ModelClass.SI, 2)
    events.infection[:] = [-math.inf, np.nan]
    network = TransmissionNetwork(np.array([NO_SOURCE, 0]))
    assert check_compatibility(events, network) == ["individual 2 has a source but no in-window infection"]


def test_terms_frame_lists_each_event(single_source_case):
    rf, rp, pop, events, network = single_source_case
    events.removal[0] = 3.0
    frame = log_likelihood_tnilm(rf, rp, pop, events, network).to_frame()
    assert list(frame.columns) == ["time", "kind", "individual", "term"]
    assert frame["kind"].tolist() == ["infection", "removal"]
    assert frame["individual"].tolist() == [2, 1]
    assert frame["term"].iloc[0] == pytest.approx(-2.2)
