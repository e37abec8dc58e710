import logging
from typing import Union

ROOT_LOGGER = "rotary_px_maps"


def get_logger(name: str = ROOT_LOGGER, level: Union[int, str, None] = None) -> logging.Logger:
    # One handler on the package root; module loggers propagate to it.
    root = logging.getLogger(ROOT_LOGGER)
    if not root.handlers:
        handler = logging.StreamHandler()
        fmt = logging.Formatter("%(asctime)s | %(levelname)s | %(name)s | %(message)s")
        handler.setFormatter(fmt)
        root.addHandler(handler)
        root.setLevel(logging.WARNING)
    logger = logging.getLogger(name)
    if level is not None:
        logger.setLevel(level)
    return logger


def set_level(level: Union[int, str]) -> None:
    get_logger(ROOT_LOGGER, level)
