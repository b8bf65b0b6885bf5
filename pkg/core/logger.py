"""引擎日志适配器。"""

from __future__ import annotations

import logging

LOGGER_NAME = "tnilm"

_engine_logger = logging.getLogger(LOGGER_NAME)


def configure_logging(verbose: bool = False) -> None:
    """命令行入口调用；库代码只写日志不配置 handler。"""
    level = logging.DEBUG if verbose else logging.INFO
    if not _engine_logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(message)s"))
        _engine_logger.addHandler(handler)
    _engine_logger.setLevel(level)


class LoggerAdapter:
    @staticmethod
    def info(message: str, *args, **kwargs):
        _engine_logger.info(message)

    @staticmethod
    def debug(message: str, *args, **kwargs):
        _engine_logger.debug(message)

    @staticmethod
    def trace(message: str, *args, **kwargs):
        _engine_logger.debug(message)

    @staticmethod
    def warning(message: str, *args, **kwargs):
        _engine_logger.warning(message)

    @staticmethod
    def error(message: str, *args, **kwargs):
        _engine_logger.error(message)

    @staticmethod
    def exception(message: str, *args, **kwargs):
        _engine_logger.error(message, exc_info=True)

    @staticmethod
    def success(message: str, *args, **kwargs):
        _engine_logger.info(f"✓ {message}")


logger = LoggerAdapter()

__all__ = ["logger", "configure_logging", "LOGGER_NAME"]
