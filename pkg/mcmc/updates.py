from __future__ import annotations

import math

import numpy as np

from core.types import IncompatibleNetworkError, RiskEvaluationError
from likelihood import LikelihoodConfig, ilm_from_values, tnilm_from_values
from model import log_prior
from rates import RiskValues, compute_risk_values
from simulate import EXTERNAL, Events, TransmissionNetwork

from .augmentation import event_time_bounds
from .chain import ChainState, MarkovChain, McmcRun, Target
from .proposals import log_truncated_mass, mh_accept, propose_parameters, sample_truncated_normal, uniform_log


def _threshold(log_u: float, old: float, correction: float) -> float:
    """新似然低于该值必被拒绝；提前终止阈值不能为正。"""
    value = old + log_u - correction
    if math.isnan(value):
        return -math.inf
    return min(0.0, value)


def _event_likelihood(
    run: McmcRun,
    values: RiskValues,
    events: Events,
    network: TransmissionNetwork,
    threshold: float = -math.inf,
) -> float:
    cfg = LikelihoodConfig(early_stop_threshold=threshold)
    try:
        if run.settings.condition_on_network:
            return tnilm_from_values(values, events, network, cfg, start_time=run.start_time).value
        return ilm_from_values(values, events, cfg, start_time=run.start_time).value
    except IncompatibleNetworkError:
        return -math.inf


def _propose_group(
    run: McmcRun,
    state: ChainState,
    targets: list[Target],
    sigma: float,
    rng: np.random.Generator,
) -> tuple[Events, float] | None:
    """依次为一组目标抽截断正态提议；返回提议状态与 log q(旧|新) - log q(新|旧)。"""
    bounds_kwargs = {
        "start_time": run.start_time,
        "condition_on_network": run.settings.condition_on_network,
    }
    proposed = state.events.copy()
    forward = 0.0
    for individual, kind in targets:
        lo, hi = event_time_bounds(
            (individual, kind), proposed, state.network, run.observations, run.extents, **bounds_kwargs
        )
        current = proposed.get(kind, individual)
        forward += log_truncated_mass(current, sigma, lo, hi)
        proposed.set(kind, individual, sample_truncated_normal(rng, current, sigma, lo, hi))

    # 反向移动按同一顺序把各目标改回旧值
    reverse = proposed.copy()
    backward = 0.0
    for individual, kind in targets:
        try:
            lo, hi = event_time_bounds(
                (individual, kind), reverse, state.network, run.observations, run.extents, **bounds_kwargs
            )
        except IncompatibleNetworkError:
            return None
        old = state.events.get(kind, individual)
        if not lo <= old <= hi:
            return None
        backward += log_truncated_mass(reverse.get(kind, individual), sigma, lo, hi)
        reverse.set(kind, individual, old)
    return proposed, forward - backward


def update_event_times(
    chain: MarkovChain,
    run: McmcRun,
    sigma: float,
    batches: int | None,
    rng: np.random.Generator,
) -> MarkovChain:
    targets = run.targets
    if not targets:
        return chain
    state = chain.state
    settings = run.settings
    batches = settings.batches_for(len(targets)) if batches is None else min(max(1, batches), len(targets))
    if settings.condition_on_network:
        current = state.log_likelihood
    else:
        current = ilm_from_values(state.values, state.events, start_time=run.start_time).value
    order = rng.permutation(len(targets))
    for group in np.array_split(order, batches):
        if group.size == 0:
            continue
        proposal = _propose_group(run, state, [targets[index] for index in group], sigma, rng)
        log_u = uniform_log(rng)
        accepted = False
        if proposal is not None:
            proposed, correction = proposal
            value = _event_likelihood(
                run, state.values, proposed, state.network, _threshold(log_u, current, correction)
            )
            accepted = mh_accept(value, current, correction, rng, log_u=log_u)
            if accepted:
                state.events = proposed
                current = value
        chain.acceptance["events"].record(accepted)
    if settings.condition_on_network:
        state.log_likelihood = current
    else:
        gibbs_update_network(chain, run, rng)
    return chain


def update_parameters(chain: MarkovChain, run: McmcRun, rng: np.random.Generator) -> bool:
    state = chain.state
    flat = propose_parameters(chain, run.settings, rng)
    log_u = uniform_log(rng)
    accepted = False
    if flat.size:
        candidate = state.parameters.with_flat(flat)
        prior = log_prior(candidate, run.priors)
        if prior > -math.inf:
            try:
                values = compute_risk_values(run.population, run.risk_functions, candidate)
            except RiskEvaluationError:
                values = None
            if values is not None:
                cfg = LikelihoodConfig(early_stop_threshold=_threshold(log_u, state.log_posterior - prior, 0.0))
                try:
                    value = tnilm_from_values(
                        values, state.events, state.network, cfg, start_time=run.start_time
                    ).value
                except IncompatibleNetworkError:
                    value = -math.inf
                accepted = mh_accept(prior + value, state.log_posterior, 0.0, rng, log_u=log_u)
                if accepted:
                    state.parameters = candidate
                    state.values = values
                    state.log_prior = prior
                    state.log_likelihood = value
    chain.acceptance["parameters"].record(accepted)
    return accepted


def sample_sources(
    values: RiskValues,
    events: Events,
    start_time: float,
    rng: np.random.Generator,
) -> tuple[TransmissionNetwork, float]:
    """按离开 S 时各来源速率的占比抽取来源；返回网络与以其为条件的对数似然。"""
    result = ilm_from_values(
        values, events, LikelihoodConfig(collect_transmission_rates=True), start_time=start_time
    )
    if not result.finite:
        raise IncompatibleNetworkError("cannot sample sources for events with zero marginal likelihood")
    network = TransmissionNetwork.empty(events.n)
    log_choice = 0.0
    for individual in sorted(result.snapshots):
        snapshot = result.snapshots[individual]
        weights = np.concatenate(([snapshot.exogenous], snapshot.endogenous))
        total = float(weights.sum())
        if not total > 0:
            raise IncompatibleNetworkError(f"individual {individual + 1} has zero exposure rate")
        draw = rng.random() * total
        index = min(int(np.searchsorted(np.cumsum(weights), draw, side="right")), len(weights) - 1)
        while weights[index] <= 0 and index > 0:
            index -= 1
        network.set_source(individual, EXTERNAL if index == 0 else index - 1)
        log_choice += math.log(weights[index]) - math.log(total)
    return network, result.value + log_choice


def gibbs_update_network(chain: MarkovChain, run: McmcRun, rng: np.random.Generator) -> TransmissionNetwork:
    state = chain.state
    network, value = sample_sources(state.values, state.events, run.start_time, rng)
    state.network = network
    state.log_likelihood = value
    return network
