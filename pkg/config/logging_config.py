"""
统一的日志配置模块

每次运行生成独立的日志文件，文件名包含命令名和时间戳；库模块只 import loguru 的
logger 并带组件标签写日志（如 "[nervecoh]"），从不自行配置 handler。

使用方法:
    from config.logging_config import setup_logger

    setup_logger("deloc_cli")              # 生成 logs/deloc_cli_20240129_143052.log
    setup_logger("deloc_cli", console=False, log_dir=tmp_path)
"""

import sys
from pathlib import Path
from datetime import datetime
from typing import Optional

from loguru import logger

from config.config import LOG_DIR, LOG_LEVEL


def setup_logger(
    script_name: str = "deloc",
    level: str = LOG_LEVEL,
    file_level: str = "DEBUG",
    console: bool = True,
    log_dir: Optional[Path] = None,
) -> Path:
    """
    配置日志系统，每次运行生成独立的日志文件

    Args:
        script_name: 命令名称，用于日志文件命名
        level: 控制台（stderr）日志级别
        file_level: 文件日志级别
        console: 是否输出到 stderr
        log_dir: 日志目录，默认 config.LOG_DIR

    Returns:
        日志文件路径
    """
    directory = Path(log_dir) if log_dir is not None else LOG_DIR
    directory.mkdir(parents=True, exist_ok=True)

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = directory / f"{script_name}_{timestamp}.log"

    # 移除默认处理器
    logger.remove()

    # 报告走 stdout / --out，日志只走 stderr，保证机器可读输出不被污染
    if console:
        logger.add(
            sys.stderr,
            format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}",
            level=level,
        )

    logger.add(
        log_file,
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} | {message}",
        level=file_level,
        encoding="utf-8",
        rotation=None,
    )

    logger.debug(f"日志文件: {log_file}")
    return log_file


def get_logger():
    """获取 logger 实例"""
    return logger
