import logging
import os
from datetime import datetime
from typing import Optional, Union

PROJECT_LOGGER = "gqd"


def setup_logging(level: Union[str, int] = "INFO", log_dir: Optional[str] = None) -> logging.Logger:
    """Setup logging configuration for the command-line tools.

    Module loggers are created with ``logging.getLogger(__name__)`` under flat
    module names, so the handlers go on the root logger; the returned
    "gqd" logger is what the entry scripts log through.
    """
    root = logging.getLogger()
    root.setLevel(level if isinstance(level, int) else level.upper())

    # Create formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Repeated calls (tests, several CLI runs in one process) must not stack handlers
    for handler in list(root.handlers):
        if getattr(handler, "_gqd_handler", False):
            root.removeHandler(handler)
            handler.close()

    # Setup console handler
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    console_handler._gqd_handler = True
    root.addHandler(console_handler)

    # Setup file handler if directory provided
    if log_dir:
        try:
            os.makedirs(log_dir, exist_ok=True)
            log_file = os.path.join(
                log_dir,
                f"gqd_{datetime.now().strftime('%Y%m%d')}.log"
            )
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            file_handler._gqd_handler = True
            root.addHandler(file_handler)
        except OSError as e:
            root.error(f"Failed to setup file logging: {e}")

    return logging.getLogger(PROJECT_LOGGER)
