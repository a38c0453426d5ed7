import logging
import sys
from pathlib import Path
from typing import Optional

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'


def setup_logger(name: str = 'assessment', verbose: bool = False, log_file: Optional[Path] = None) -> logging.Logger:
    level = logging.DEBUG if verbose else logging.INFO
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Repeated CLI runs in one process (tests) must not stack handlers
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setLevel(level)
    stream_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(stream_handler)

    if log_file is not None:
        file_handler = logging.FileHandler(log_file, mode='a')
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(f'%(asctime)s {LOG_FORMAT}'))
        logger.addHandler(file_handler)

    return logger
