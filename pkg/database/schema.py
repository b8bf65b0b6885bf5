from __future__ import annotations


SCHEMA_SQL = (
    """
    CREATE TABLE IF NOT EXISTS chains (
        chain INTEGER PRIMARY KEY,
        model_class TEXT,
        individuals INTEGER,
        created_at INTEGER DEFAULT 0
    )
    """,
    """
    CREATE TABLE IF NOT EXISTS samples (
        chain INTEGER,
        iteration INTEGER,
        events BLOB,
        network BLOB,
        PRIMARY KEY (chain, iteration),
        FOREIGN KEY (chain) REFERENCES chains (chain)
    )
    """,
)


def init_schema(conn) -> None:
    for statement in SCHEMA_SQL:
        conn.execute(statement)
