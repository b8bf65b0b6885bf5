from __future__ import annotations

import time
from typing import Iterable, Iterator

import numpy as np

from .models import ChainInfo, SampleRecord


class SampleStoreMixin:
    _chains: dict[int, ChainInfo]

    def register_chain(self, chain: int, model_class: str, individuals: int) -> None:
        self._chains.pop(int(chain), None)
        with self._connect() as conn:
            conn.execute(
                """
                INSERT OR REPLACE INTO chains (chain, model_class, individuals, created_at)
                VALUES (?, ?, ?, ?)
                """,
                (int(chain), str(model_class), int(individuals), int(time.time())),
            )
            conn.commit()

    def get_chain(self, chain: int) -> ChainInfo | None:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT chain, model_class, individuals, created_at FROM chains WHERE chain = ?",
                (int(chain),),
            ).fetchone()
        if row is None:
            return None
        return ChainInfo(chain=row[0], model_class=row[1], individuals=row[2], created_at=int(row[3] or 0))

    def add_samples(self, records: Iterable[SampleRecord]) -> int:
        rows = [
            (
                int(record.chain),
                int(record.iteration),
                np.ascontiguousarray(record.events, dtype=np.float64).tobytes(),
                np.ascontiguousarray(record.network, dtype=np.int64).tobytes(),
            )
            for record in records
        ]
        if not rows:
            return 0
        with self._connect() as conn:
            conn.executemany(
                "INSERT OR REPLACE INTO samples (chain, iteration, events, network) VALUES (?, ?, ?, ?)",
                rows,
            )
            conn.commit()
        return len(rows)

    def get_sample(self, chain: int, iteration: int) -> SampleRecord | None:
        info = self._require_chain(chain)
        with self._connect() as conn:
            row = conn.execute(
                "SELECT iteration, events, network FROM samples WHERE chain = ? AND iteration = ?",
                (int(chain), int(iteration)),
            ).fetchone()
        if row is None:
            return None
        return self._record_from_row(chain, info.individuals, row)

    def iter_samples(self, chain: int, iterations: Iterable[int] | None = None) -> Iterator[SampleRecord]:
        info = self._require_chain(chain)
        with self._connect() as conn:
            if iterations is None:
                cursor = conn.execute(
                    "SELECT iteration, events, network FROM samples WHERE chain = ? ORDER BY iteration ASC",
                    (int(chain),),
                )
                rows = cursor.fetchall()
            else:
                rows = []
                for iteration in iterations:
                    row = conn.execute(
                        "SELECT iteration, events, network FROM samples WHERE chain = ? AND iteration = ?",
                        (int(chain), int(iteration)),
                    ).fetchone()
                    if row is not None:
                        rows.append(row)
        for row in rows:
            yield self._record_from_row(chain, info.individuals, row)

    def count_samples(self, chain: int) -> int:
        with self._connect() as conn:
            (count,) = conn.execute("SELECT COUNT(*) FROM samples WHERE chain = ?", (int(chain),)).fetchone()
        return int(count)

    def _require_chain(self, chain: int) -> ChainInfo:
        info = self._chains.get(int(chain)) or self.get_chain(chain)
        if info is None:
            raise KeyError(f"chain {chain} is not registered in {self.db_path}")
        self._chains[int(chain)] = info
        return info

    @staticmethod
    def _record_from_row(chain: int, individuals: int, row) -> SampleRecord:
        events = np.frombuffer(row[1], dtype=np.float64).reshape(3, individuals).copy()
        network = np.frombuffer(row[2], dtype=np.int64).copy()
        return SampleRecord(chain=int(chain), iteration=int(row[0]), events=events, network=network)
