from __future__ import annotations

import sqlite3
from pathlib import Path

from .models import ChainInfo, SampleRecord
from .schema import init_schema
from .samples import SampleStoreMixin


class SampleStore(SampleStoreMixin):
    """链样本的 SQLite 溢出存储；参数轨迹仍在内存与 CSV 中。

    同一实例复用一个连接，直到 close()。跨进程传递时只携带路径，连接在使用时重新打开。
    """

    def __init__(self, db_path: Path | str):
        self.db_path = Path(db_path)
        self._conn: sqlite3.Connection | None = None
        self._chains: dict[int, ChainInfo] = {}
        self._init_db()

    def _init_db(self) -> None:
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        with self._connect() as conn:
            init_schema(conn)
            conn.commit()

    def _connect(self) -> sqlite3.Connection:
        if self._conn is None:
            conn = sqlite3.connect(self.db_path, timeout=30)
            conn.execute("PRAGMA busy_timeout = 5000")
            conn.execute("PRAGMA journal_mode = WAL")
            conn.execute("PRAGMA synchronous = NORMAL")
            conn.execute("PRAGMA foreign_keys = ON")
            self._conn = conn
        return self._conn

    @property
    def is_open(self) -> bool:
        return self._conn is not None

    def close(self) -> None:
        if self._conn is not None:
            self._conn.close()
            self._conn = None

    def __enter__(self) -> "SampleStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def __getstate__(self) -> dict:
        return {"db_path": self.db_path}

    def __setstate__(self, state: dict) -> None:
        self.db_path = state["db_path"]
        self._conn = None
        self._chains = {}


__all__ = ["ChainInfo", "SampleRecord", "SampleStore"]
