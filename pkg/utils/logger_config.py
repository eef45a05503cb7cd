"""
Log handlers for verification runs
One file per run holds the exploration trail; the console only shows
warnings so that verdicts printed on stdout can be piped.
"""

import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

RUN_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
RUN_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logging(log_dir: Optional[str] = "logs", log_level: Union[int, str] = logging.DEBUG,
                  console_level: Union[int, str] = logging.WARNING):
    """
    Attach the run log and the console handler to the root logger

    Args:
        log_dir: Where run logs are written; None or "" keeps the run on the console only
        log_level: Lowest level kept in the run log
        console_level: Lowest level echoed to stderr

    Returns:
        The root logger
    """
    formatter = logging.Formatter(RUN_FORMAT, datefmt=RUN_DATE_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    # a second call (tests, examples) replaces the handlers of the first
    root_logger.handlers.clear()

    run_log = None
    if log_dir:
        Path(log_dir).mkdir(parents=True, exist_ok=True)
        started = datetime.now().strftime("%Y%m%d_%H%M%S")
        run_log = os.path.join(log_dir, f"evoverify_{started}.log")

        file_handler = logging.FileHandler(run_log, encoding='utf-8')
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    # stderr
    console_handler = logging.StreamHandler()
    console_handler.setLevel(console_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    root_logger.info(f"EvoVerify run started, run log at {run_log or '(none)'}")

    return root_logger


def get_logger(name: str):
    """Module logger, named after the module (`__name__`)"""
    return logging.getLogger(name)
