from __future__ import annotations

import math
import time

import numpy as np

from core.logger import logger
from core.types import ConfigError, InitializationError, RiskEvaluationError
from likelihood import LikelihoodConfig, ilm_from_values
from model import RiskParameters, log_prior, sample_priors
from rates import RiskValues, compute_risk_values
from simulate import Events

from .augmentation import draw_initial_events
from .chain import ChainState, MarkovChain, McmcRun
from .proposals import fixed_kernel_sd
from .updates import sample_sources


def _candidate(
    run: McmcRun,
    rng: np.random.Generator,
) -> tuple[RiskParameters, float, Events, RiskValues] | None:
    parameters = sample_priors(run.priors, rng)
    prior = log_prior(parameters, run.priors)
    if prior == -math.inf:
        return None
    events = draw_initial_events(run.observations, run.extents, run.start_time, rng)
    if events is None:
        return None
    try:
        values = compute_risk_values(run.population, run.risk_functions, parameters)
    except RiskEvaluationError:
        return None
    return parameters, prior, events, values


def initialize_chain(
    run: McmcRun,
    attempts: int,
    rng: np.random.Generator,
    *,
    index: int = 0,
    seed: int | None = None,
) -> MarkovChain:
    """多次从先验与观测窗口抽初值，保留边缘似然下后验最高的一组。"""
    if attempts < 1:
        raise ConfigError(f"attempts must be >= 1, got {attempts}")
    if any(prior.family == "flat" for prior in run.priors.flat()):
        raise ConfigError("flat priors cannot be sampled for chain initialization")
    started = time.perf_counter()
    best_score = -math.inf
    best: tuple[RiskParameters, float, Events, RiskValues] | None = None
    report_every = max(1, attempts // 10)
    for attempt in range(1, attempts + 1):
        candidate = _candidate(run, rng)
        if candidate is not None:
            parameters, prior, events, values = candidate
            threshold = min(0.0, best_score - prior) if best_score > -math.inf else -math.inf
            result = ilm_from_values(
                values, events, LikelihoodConfig(early_stop_threshold=threshold), start_time=run.start_time
            )
            score = prior + result.value
            if score > best_score:
                best_score, best = score, candidate
        if attempt % report_every == 0:
            logger.debug(f"链 {index} 初始化进度 {attempt}/{attempts}, 当前最优对数后验 {best_score:.4f}")
    if best is None:
        raise InitializationError(
            f"no initial state with finite posterior after {attempts} attempts; "
            "widen the event extents or the priors"
        )

    parameters, prior, events, values = best
    network, log_likelihood = sample_sources(values, events, run.start_time, rng)
    state = ChainState(parameters, values, events, network, prior, log_likelihood)
    chain = MarkovChain(
        index=index,
        seed=run.settings.seed + index if seed is None else seed,
        state=state,
        rng=rng,
        fixed_kernel_sd=fixed_kernel_sd(run.priors, run.settings),
    )
    chain.record()
    chain.elapsed += time.perf_counter() - started
    logger.info(f"链 {index} 初始化完成: 对数后验 {state.log_posterior:.4f}, 尝试 {attempts} 次")
    return chain
