from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from core.types import ConfigError
from simulate import EXTERNAL

from .samples import chains_of
from .summary import retained_indices


@dataclass(frozen=True, slots=True)
class TNDistribution:
    """传播网络的后验：edge_prob[k, i] 为 k 感染 i 的后验概率。"""

    external_prob: np.ndarray
    edge_prob: np.ndarray
    samples: int = 0

    @property
    def n(self) -> int:
        return len(self.external_prob)

    @property
    def infected_prob(self) -> np.ndarray:
        """每个个体在窗口内被感染（有来源）的样本比例。"""
        return self.external_prob + self.edge_prob.sum(axis=0)

    def out_degree(self) -> np.ndarray:
        return self.edge_prob.sum(axis=1)

    def edges(self, min_probability: float = 0.0) -> pd.DataFrame:
        """加权边表，source 为个体编号或 external。"""
        rows = []
        for infectee in np.flatnonzero(self.external_prob > min_probability):
            rows.append(("external", int(infectee) + 1, float(self.external_prob[infectee])))
        sources, infectees = np.nonzero(self.edge_prob > min_probability)
        for source, infectee in zip(sources, infectees):
            rows.append((str(int(source) + 1), int(infectee) + 1, float(self.edge_prob[source, infectee])))
        frame = pd.DataFrame(rows, columns=["source", "target", "probability"])
        return frame.sort_values(["target", "probability"], ascending=[True, False], ignore_index=True)

    def out_degree_frame(self) -> pd.DataFrame:
        degree = self.out_degree()
        frame = pd.DataFrame(
            {
                "individual": np.arange(1, self.n + 1),
                "out_degree": degree,
                "external_prob": self.external_prob,
            }
        )
        return frame.sort_values(["out_degree", "individual"], ascending=[False, True], ignore_index=True)


def from_networks(networks: list[np.ndarray], n: int) -> TNDistribution:
    if not networks:
        raise ConfigError("no retained network samples")
    external = np.zeros(n)
    edges = np.zeros((n, n))
    for sources in networks:
        external += sources == EXTERNAL
        infectees = np.flatnonzero(sources >= 0)
        np.add.at(edges, (sources[infectees], infectees), 1.0)
    count = len(networks)
    return TNDistribution(external / count, edges / count, count)


def network_posterior(source, burnin: int = 0, thin: int = 1) -> TNDistribution:
    """保留样本中各条传播边出现的频率，所有链合并。"""
    chains = chains_of(source)
    if not chains:
        raise ConfigError("no chains to summarize")
    networks = []
    for chain in chains:
        for iteration in retained_indices(chain.iterations, burnin, thin):
            networks.append(chain.network_at(iteration).sources)
    return from_networks(networks, len(networks[0]))
