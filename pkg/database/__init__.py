from .db_manager import ChainInfo, SampleRecord, SampleStore

__all__ = ["ChainInfo", "SampleRecord", "SampleStore"]
