from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri

from core.logger import logger
from model import RiskPriors

from .settings import FIXED_KERNEL_SD, McmcSettings

if TYPE_CHECKING:
    from .chain import MarkovChain

MAX_JITTER_STEPS = 12


def sample_truncated_normal(
    rng: np.random.Generator,
    mean: float,
    sigma: float,
    lo: float,
    hi: float,
) -> float:
    """N(mean, sigma²) 截断到 [lo, hi]，逆 CDF 抽样。"""
    a, b = (lo - mean) / sigma, (hi - mean) / sigma
    flip = a > 0
    if flip:
        a, b = -b, -a
    low, high = ndtr(a), ndtr(b)
    z = float(ndtri(low + rng.random() * (high - low)))
    if flip:
        z = -z
    return min(max(mean + sigma * z, lo), hi)


def log_truncated_mass(mean: float, sigma: float, lo: float, hi: float) -> float:
    """log(Φ((hi - mean)/σ) - Φ((lo - mean)/σ))。"""
    a, b = (lo - mean) / sigma, (hi - mean) / sigma
    if a > 0:
        a, b = -b, -a
    upper = float(log_ndtr(b))
    lower = float(log_ndtr(a))
    if lower == -math.inf:
        return upper
    if lower >= upper:
        return -math.inf
    return upper + math.log1p(-math.exp(lower - upper))


def uniform_log(rng: np.random.Generator) -> float:
    return math.log1p(-rng.random())


def mh_accept(
    log_post_new: float,
    log_post_old: float,
    log_proposal_correction: float,
    rng: np.random.Generator,
    *,
    log_u: float | None = None,
) -> bool:
    """Metropolis-Hastings 判定：log U < 新 - 旧 + 提议修正。"""
    if log_u is None:
        log_u = uniform_log(rng)
    if log_post_new == -math.inf or math.isnan(log_post_new):
        return False
    return log_u < log_post_new - log_post_old + log_proposal_correction


def fixed_kernel_sd(priors: RiskPriors, settings: McmcSettings) -> np.ndarray:
    """固定核的逐分量标准差：0.1/√p，prior 模式再乘先验标准差。"""
    dimension = priors.count
    if dimension == 0:
        return np.zeros(0)
    base = FIXED_KERNEL_SD / math.sqrt(dimension)
    if settings.fixed_kernel != "prior":
        return np.full(dimension, base)
    scales = []
    for prior in priors.flat():
        variance = prior.variance()
        scales.append(math.sqrt(variance) if math.isfinite(variance) and variance > 0 else 1.0)
    return base * np.asarray(scales)


def _cholesky(matrix: np.ndarray, jitter: float) -> np.ndarray | None:
    identity = np.eye(len(matrix))
    for _ in range(MAX_JITTER_STEPS):
        try:
            return np.linalg.cholesky(matrix + jitter * identity)
        except np.linalg.LinAlgError:
            jitter *= 10
    logger.debug(f"协方差矩阵加抖动 {jitter:g} 后仍非正定，改用固定核")
    return None


def propose_parameters(chain: "MarkovChain", settings: McmcSettings, rng: np.random.Generator) -> np.ndarray:
    """样本数不足 2p 时用固定核；之后以 1 - β 的概率用自适应核 N(θ, s_d Σ̂ + λI)。"""
    current = chain.state.parameters.flatten()
    dimension = current.size
    if dimension == 0:
        return current
    if settings.adapt and chain.covariance.count >= 2 * dimension and rng.random() >= settings.mixing_weight:
        factor = _cholesky(settings.scale(dimension) * chain.covariance.covariance(), settings.jitter)
        if factor is not None:
            return current + factor @ rng.standard_normal(dimension)
    return current + chain.fixed_kernel_sd * rng.standard_normal(dimension)
