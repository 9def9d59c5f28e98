import logging
import os
import sys
from config.settings import Config


def setup_logger(name, log_file=None, level=None):
    """Logger kurulumu (stdout makine çıktısına ayrılır, loglar stderr'e gider)"""
    config = Config()
    if level is None:
        level = config.LOG_LEVEL
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)

    # Formatter
    formatter = logging.Formatter(config.LOG_FORMAT)

    logger = logging.getLogger(name)
    logger.setLevel(level)
    # Tekrar çağrıldığında handler'lar çoğalmasın
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    # Console handler
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
