from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from core.logger import logger
from core.rng import stream
from core.types import ConfigError, InitializationError
from likelihood import check_compatibility, log_likelihood_tnilm
from model import EventExtents, RiskFunctions, RiskPriors, log_prior, validate_model
from population import Population
from simulate import EventObservations

from .chain import ChainState, MarkovChain, McmcRun, default_start_time
from .initialize import initialize_chain
from .settings import McmcSettings
from .updates import gibbs_update_network, update_event_times, update_parameters

AUDIT_TOLERANCE = 1e-8


def _initialize_job(job: tuple[McmcRun, int]) -> MarkovChain:
    run, index = job
    return initialize_chain(run, run.settings.init_attempts, stream(run.settings.seed, index), index=index)


def _advance_job(job: tuple[McmcRun, MarkovChain, int]) -> MarkovChain:
    run, chain, iterations = job
    return advance_chain(chain, run, iterations)


def _map(function, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [function(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as executor:
        return list(executor.map(function, jobs))


def start(run: McmcRun, *, workers: int = 1) -> McmcRun:
    """为每条链独立初始化，随机数流为 seed + 链序号。"""
    problems = run.extents.problems(run.model_class)
    if problems:
        raise InitializationError("; ".join(problems))
    context = run.without_chains()
    logger.info(
        f"初始化 {run.settings.chains} 条链, 每条尝试 {run.settings.init_attempts} 次, "
        f"增广事件 {len(run.targets)} 个"
    )
    run.chains = _map(_initialize_job, [(context, index) for index in range(run.settings.chains)], workers)
    return run


def advance_chain(chain: MarkovChain, run: McmcRun, iterations: int) -> MarkovChain:
    """单条链顺序迭代：事件时刻、参数、传播网络，每次迭代存一个样本。"""
    settings = run.settings
    rng = chain.rng
    batches = settings.batches_for(len(run.targets))
    started = time.perf_counter()
    for step in range(1, iterations + 1):
        update_event_times(chain, run, settings.event_sigma, batches, rng)
        update_parameters(chain, run, rng)
        gibbs_update_network(chain, run, rng)
        chain.record()
        if settings.audit_every and chain.iterations % settings.audit_every == 0:
            for problem in audit_state(run, chain.state):
                logger.warning(f"链 {chain.index} 迭代 {chain.iterations} 审计失败: {problem}")
        if step % settings.progress_interval == 0:
            chain.flush()
            rates = chain.acceptance_summary()
            logger.info(
                f"链 {chain.index}: 迭代 {chain.iterations}, 对数后验 {chain.state.log_posterior:.4f}, "
                f"接受率 事件 {rates['events']:.3f} 参数 {rates['parameters']:.3f}"
            )
    chain.close_store()
    chain.elapsed += time.perf_counter() - started
    return chain


def iterate(
    run: McmcRun,
    iterations: int,
    settings: McmcSettings | None = None,
    *,
    workers: int = 1,
) -> McmcRun:
    if settings is not None:
        run.settings = replace(settings, seed=run.settings.seed)
    if iterations <= 0:
        return run
    if not run.chains:
        raise InitializationError("run has no initialized chains")
    context = run.without_chains()
    logger.info(f"{len(run.chains)} 条链各迭代 {iterations} 次, 进程数={min(workers, len(run.chains))}")
    run.chains = _map(_advance_job, [(context, chain, iterations) for chain in run.chains], workers)
    for chain in run.chains:
        rates = chain.acceptance_summary()
        logger.success(
            f"链 {chain.index} 完成 {chain.iterations} 次迭代, 用时 {chain.elapsed:.1f}s, "
            f"接受率 事件 {rates['events']:.3f} 参数 {rates['parameters']:.3f}"
        )
    return run


def _close(stored: float, recomputed: float) -> bool:
    if math.isinf(stored) or math.isinf(recomputed):
        return stored == recomputed
    return abs(stored - recomputed) <= AUDIT_TOLERANCE * max(1.0, abs(stored))


def audit_state(run: McmcRun, state: ChainState) -> list[str]:
    """重新计算对数后验并检查网络相容性。"""
    problems = check_compatibility(state.events, state.network)
    prior = log_prior(state.parameters, run.priors)
    likelihood = log_likelihood_tnilm(
        run.risk_functions,
        state.parameters,
        run.population,
        state.events,
        state.network,
        start_time=run.start_time,
    ).value
    if not math.isfinite(prior + likelihood):
        problems.append("log posterior is not finite")
    elif not _close(state.log_posterior, prior + likelihood):
        problems.append(f"stored log posterior {state.log_posterior:.10g} != recomputed {prior + likelihood:.10g}")
    return problems


def audit_chain(run: McmcRun, chain: MarkovChain, every: int = 100) -> list[str]:
    """对存储样本按间隔抽查：相容性与对数后验复算。"""
    problems = []
    for iteration in range(0, chain.iterations + 1, max(1, every)):
        parameters = chain.parameters_at(iteration)
        events = chain.events_at(iteration)
        network = chain.network_at(iteration)
        for problem in check_compatibility(events, network):
            problems.append(f"iteration {iteration}: {problem}")
        prior = log_prior(parameters, run.priors)
        likelihood = log_likelihood_tnilm(
            run.risk_functions, parameters, run.population, events, network, start_time=run.start_time
        ).value
        stored = chain.log_posteriors[iteration]
        if not math.isfinite(stored):
            problems.append(f"iteration {iteration}: stored log posterior is not finite")
        elif not _close(stored, prior + likelihood):
            problems.append(
                f"iteration {iteration}: stored log posterior {stored:.10g} != recomputed {prior + likelihood:.10g}"
            )
    return problems


def create_run(
    observations: EventObservations,
    extents: EventExtents,
    population: Population,
    risk_functions: RiskFunctions,
    priors: RiskPriors,
    settings: McmcSettings | None = None,
    *,
    start_time: float | None = None,
) -> McmcRun:
    """校验模型、先验与观测后组装推断任务。"""
    model_class = risk_functions.model_class
    problems = list(extents.problems(model_class))
    if observations.model_class is not model_class:
        problems.append(f"observations are {observations.model_class.value}, model is {model_class.value}")
    if observations.n != population.n:
        problems.append(f"observations cover {observations.n} individuals, population has {population.n}")
    if problems:
        raise ConfigError("; ".join(problems))
    validate_model(model_class, risk_functions, priors=priors, pop=population).raise_if_failed()
    if start_time is None:
        start_time = default_start_time(observations, extents)
    return McmcRun(
        observations=observations,
        extents=extents,
        population=population,
        risk_functions=risk_functions,
        priors=priors,
        settings=settings or McmcSettings(),
        start_time=float(start_time),
    )
