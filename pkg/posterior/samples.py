"""链样本的磁盘格式：每条链一个目录，参数轨迹、事件与网络样本各一个文件。"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np
import pandas as pd

from core.types import ConfigError, EventKind, ModelClass
from database import SampleStore
from simulate import EXTERNAL, NO_SOURCE, Events, TransmissionNetwork, write_frame_csv

PARAMETERS_FILE = "parameters.csv"
EVENTS_FILE = "events.csv"
NETWORK_FILE = "network.csv"
SPILL_FILE = "samples.sqlite"
TRACE_COLUMNS = ("iteration", "log_likelihood", "log_posterior")

_ROWS = {EventKind.EXPOSURE: 0, EventKind.INFECTION: 1, EventKind.REMOVAL: 2}


class SampleSource(Protocol):
    index: int

    @property
    def model_class(self) -> ModelClass: ...

    @property
    def iterations(self) -> int: ...

    @property
    def labels(self) -> list[str]: ...

    def parameter_frame(self) -> pd.DataFrame: ...

    def events_at(self, iteration: int) -> Events: ...

    def network_at(self, iteration: int) -> TransmissionNetwork: ...


@dataclass(slots=True)
class ChainSamples:
    """从链目录读回的样本，接口与 MarkovChain 的只读部分一致。"""

    index: int
    model_class: ModelClass
    parameters: pd.DataFrame
    events: np.ndarray | None = None
    networks: np.ndarray | None = None
    store: SampleStore | None = None

    @property
    def iterations(self) -> int:
        return len(self.parameters) - 1

    @property
    def labels(self) -> list[str]:
        return [column for column in self.parameters.columns if column not in TRACE_COLUMNS]

    def parameter_frame(self) -> pd.DataFrame:
        return self.parameters

    def events_at(self, iteration: int) -> Events:
        if self.events is not None:
            return Events.from_array(self.model_class, self.events[iteration])
        return Events.from_array(self.model_class, self._record(iteration).events)

    def network_at(self, iteration: int) -> TransmissionNetwork:
        if self.networks is not None:
            return TransmissionNetwork(self.networks[iteration].copy())
        return TransmissionNetwork(self._record(iteration).network)

    def _record(self, iteration: int):
        if self.store is None:
            raise IndexError(f"chain {self.index} has no stored augmented samples")
        record = self.store.get_sample(self.index, iteration)
        if record is None:
            raise IndexError(f"iteration {iteration} missing from {self.store.db_path}")
        return record


def chain_directory(output_dir: str | Path, index: int) -> Path:
    return Path(output_dir) / f"chain_{index + 1}"


def write_chain(chain: SampleSource, directory: str | Path) -> list[Path]:
    """写出参数轨迹；事件与网络样本未溢出到 SQLite 时写成长格式 CSV。"""
    directory = Path(directory)
    written = [write_frame_csv(chain.parameter_frame(), directory / PARAMETERS_FILE)]
    if getattr(chain, "spill_path", None):
        written.append(Path(chain.spill_path))
        return written
    count = chain.iterations + 1
    events = np.stack([chain.events_at(iteration).as_array() for iteration in range(count)])
    n = events.shape[2]
    data = {
        "iteration": np.repeat(np.arange(count), n),
        "individual": np.tile(np.arange(1, n + 1), count),
    }
    for kind in chain.model_class.event_kinds:
        data[kind.value] = events[:, _ROWS[kind], :].reshape(-1)
    written.append(write_frame_csv(pd.DataFrame(data), directory / EVENTS_FILE))

    networks = np.stack([chain.network_at(iteration).sources for iteration in range(count)])
    iterations, infectees = np.nonzero(networks != NO_SOURCE)
    sources = networks[iterations, infectees]
    frame = pd.DataFrame(
        {
            "iteration": iterations,
            "infectee": infectees + 1,
            "source": np.where(sources == EXTERNAL, "external", (sources + 1).astype(str)),
        }
    )
    written.append(write_frame_csv(frame, directory / NETWORK_FILE))
    return written


def _events_array(frame: pd.DataFrame, model_class: ModelClass, iterations: int, n: int) -> np.ndarray:
    ordered = frame.sort_values(["iteration", "individual"])
    if len(ordered) != (iterations + 1) * n:
        raise ConfigError(f"events file has {len(ordered)} rows, expected {(iterations + 1) * n}")
    array = np.full((iterations + 1, 3, n), np.nan)
    for kind in model_class.event_kinds:
        array[:, _ROWS[kind], :] = ordered[kind.value].to_numpy(dtype=float).reshape(iterations + 1, n)
    return array


def _network_array(frame: pd.DataFrame, iterations: int, n: int) -> np.ndarray:
    array = np.full((iterations + 1, n), NO_SOURCE, dtype=np.int64)
    if len(frame):
        sources = frame["source"].astype(str).str.strip()
        external = (sources == "external").to_numpy()
        numbers = pd.to_numeric(sources.where(~external, "0")).to_numpy(dtype=np.int64)
        values = np.where(external, EXTERNAL, numbers - 1)
        array[frame["iteration"].to_numpy(dtype=int), frame["infectee"].to_numpy(dtype=int) - 1] = values
    return array


def load_chain(directory: str | Path, model_class: ModelClass, index: int, n: int) -> ChainSamples:
    directory = Path(directory)
    parameters_path = directory / PARAMETERS_FILE
    if not parameters_path.is_file():
        raise ConfigError(f"chain samples not found: {parameters_path}")
    parameters = pd.read_csv(parameters_path)
    iterations = len(parameters) - 1
    spill = directory / SPILL_FILE
    if not (directory / EVENTS_FILE).is_file() and spill.is_file():
        return ChainSamples(index, model_class, parameters, store=SampleStore(spill))
    events = _events_array(pd.read_csv(directory / EVENTS_FILE), model_class, iterations, n)
    networks = _network_array(pd.read_csv(directory / NETWORK_FILE, dtype={"source": str}), iterations, n)
    return ChainSamples(index, model_class, parameters, events, networks)


def load_chains(output_dir: str | Path, model_class: ModelClass, chains: int, n: int) -> list[ChainSamples]:
    return [load_chain(chain_directory(output_dir, index), model_class, index, n) for index in range(chains)]


def chains_of(source) -> Sequence[SampleSource]:
    """McmcRun 取其 chains，单条链包装成列表。"""
    chains = getattr(source, "chains", source)
    if hasattr(chains, "events_at"):
        return [chains]
    return list(chains)
