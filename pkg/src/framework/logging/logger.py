import logging
import os
import colorama
from typing import Dict, Optional

# Initialize colorama for Windows compatibility
colorama.init(autoreset=True)

# Color codes for different log levels
COLORS = {
    'DEBUG': '\033[36m',      # Cyan
    'INFO': '\033[32m',       # Green
    'WARNING': '\033[33m',    # Yellow
    'ERROR': '\033[31m',      # Red
    'CRITICAL': '\033[31;1m'  # Bold Red
}

SHORT_NAME_PREFIXES = ('src.spectral.', 'src.framework.')

_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
_DATEFMT = '%Y-%m-%d %H:%M:%S'

_file_handlers: Dict[str, logging.FileHandler] = {}


def _file_handler(log_file: str) -> logging.FileHandler:
    """One handler per log file, shared by every logger that writes to it"""
    path = os.path.abspath(log_file)
    handler = _file_handlers.get(path)
    if handler is None:
        handler = logging.FileHandler(path)
        handler.setFormatter(logging.Formatter(fmt=_FORMAT, datefmt=_DATEFMT))
        _file_handlers[path] = handler
    return handler


class ColorFormatter(logging.Formatter):
    """Add colors to log level names and simplify logger names"""
    def format(self, record):
        record = logging.makeLogRecord(record.__dict__)
        if record.name.startswith(SHORT_NAME_PREFIXES):
            record.name = record.name.split('.')[-1]

        levelname = record.levelname
        if levelname in COLORS:
            record.levelname = f"{COLORS[levelname]}{levelname}\033[0m"

        return super().format(record)


def setup_logger(name: str, level: Optional[int] = logging.INFO, log_file: Optional[str] = None) -> logging.Logger:
    """Set up a logger with consistent formatting"""
    logger = logging.getLogger(name)

    # Remove any existing handlers
    if logger.handlers:
        for handler in logger.handlers[:]:
            logger.removeHandler(handler)

    logger.setLevel(level)

    formatter = ColorFormatter(fmt=_FORMAT, datefmt=_DATEFMT)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        logger.addHandler(_file_handler(log_file))

    # Prevent log propagation to avoid duplicate logs
    logger.propagate = False

    return logger


def get_logger(name: str, level: Optional[int] = logging.INFO, log_file: Optional[str] = None) -> logging.Logger:
    """Get a logger with consistent formatting"""
    return setup_logger(name, level, log_file)


def configure_logging(level: str = 'INFO', log_file: Optional[str] = None) -> None:
    """Re-level every project logger created so far, optionally teeing to a file"""
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown log level: {level}")

    for name in list(logging.Logger.manager.loggerDict):
        if name.startswith('src.') or name == 'scripts.cli':
            setup_logger(name, numeric, log_file)
