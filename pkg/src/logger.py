import logging
import os
import sys

from loguru import logger

LOG_LEVEL = logging.getLevelName(os.environ.get("LOG_LEVEL", "INFO"))
JSON_LOGS = True if os.environ.get("JSON_LOGS", "0") == "1" else False

# loggers of libraries that log through the standard logging module
INTERCEPTED = ("uvicorn", "uvicorn.access", "uvicorn.error", "fastapi")


class InterceptHandler(logging.Handler):
    def emit(self, record):
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # skip the logging module's own frames
        frame, depth = logging.currentframe(), 2
        while frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(sink=sys.stdout):
    """
    Route standard logging into loguru and send everything to ``sink``.

    The CLI passes ``sys.stderr`` so tables printed on standard output stay clean.
    """
    logging.root.handlers = [InterceptHandler()]
    logging.root.setLevel(LOG_LEVEL)

    for name in set(logging.root.manager.loggerDict.keys()) | set(INTERCEPTED):
        logging.getLogger(name).handlers = []
        logging.getLogger(name).propagate = True

    logger.configure(handlers=[{"sink": sink, "serialize": JSON_LOGS, "level": LOG_LEVEL}])
