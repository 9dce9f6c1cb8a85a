import logging
import os
import sys

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - [%(filename)s:%(lineno)d] - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class LoggerHelper:

    def __init__(self, name: str = __name__):
        self.logger = logging.getLogger(name)

        # Set log level based on env variable or default to INFO
        log_level = os.getenv("LOG_LEVEL", "INFO").upper()
        self.logger.setLevel(log_level)

        # stdout carries the CLI summary line, so log records go to stderr
        if not self.logger.handlers:
            handler = logging.StreamHandler(sys.stderr)
            handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
            self.logger.addHandler(handler)

        self.logger.propagate = False

    def get_logger(self) -> logging.Logger:
        return self.logger

    @staticmethod
    def add_file_handler(path: str) -> logging.Handler:
        """Mirror every project logger into a run log file. Returns the handler so the caller can detach it."""
        handler = logging.FileHandler(path, encoding="utf-8")
        handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
        for logger in _project_loggers():
            logger.addHandler(handler)
        return handler

    @staticmethod
    def remove_handler(handler: logging.Handler) -> None:
        for logger in _project_loggers():
            if handler in logger.handlers:
                logger.removeHandler(handler)
        handler.close()


def _project_loggers():
    manager = logging.Logger.manager
    for logger in list(manager.loggerDict.values()):
        if isinstance(logger, logging.Logger) and not logger.propagate:
            yield logger
