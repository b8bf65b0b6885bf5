from __future__ import annotations

import functools
from typing import Callable

from core.logger import logger
from core.types import EXIT_RUNTIME, TnilmError, exit_code_for


def guarded(command: Callable[..., int]) -> Callable[..., int]:
    """把异常转换为退出码：配置类错误 2，运行 / 推断错误 3。"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs) -> int:
        try:
            return command(*args, **kwargs)
        except TnilmError as exc:
            logger.error(f"{command.__name__} 失败: {exc}")
            return exit_code_for(exc)
        except Exception as exc:
            logger.exception(f"{command.__name__} 出现未预期的错误: {exc}")
            return EXIT_RUNTIME

    return wrapper
