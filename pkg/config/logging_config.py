import logging
import logging.handlers
import os

from config.settings import settings

COMPONENT_LOGGERS = [
    'polymatroid',
    'lattice',
    'operations',
    'cohomology',
    'realization',
    'ht_action',
    'generator',
    'fuzz',
    'cli',
    'api',
]

_configured = False


def setup_logging(force: bool = False) -> None:
    """Setup logging configuration for the application"""
    global _configured
    if _configured and not force:
        return

    level = getattr(logging, settings.LOG_LEVEL, logging.INFO)

    # Create formatters
    detailed_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
    )

    simple_formatter = logging.Formatter(
        '%(asctime)s - %(levelname)s - %(message)s'
    )

    # Setup root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # Clear any existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    # Console handler goes to stderr so command output on stdout stays clean
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.WARNING if level < logging.WARNING else level)
    console_handler.setFormatter(simple_formatter)
    root_logger.addHandler(console_handler)

    if settings.LOG_TO_FILE:
        os.makedirs(settings.LOGS_DIR, exist_ok=True)

        # File handler for general logs
        general_log_file = os.path.join(settings.LOGS_DIR, 'polymatroid_toolkit.log')
        file_handler = logging.handlers.RotatingFileHandler(
            general_log_file,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(detailed_formatter)
        root_logger.addHandler(file_handler)

        # Error file handler
        error_log_file = os.path.join(settings.LOGS_DIR, 'errors.log')
        error_handler = logging.handlers.RotatingFileHandler(
            error_log_file,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(detailed_formatter)
        root_logger.addHandler(error_handler)

    # Create specific loggers for different components
    for logger_name in COMPONENT_LOGGERS:
        logger = logging.getLogger(logger_name)
        logger.setLevel(level)

        for handler in logger.handlers[:]:
            logger.removeHandler(handler)

        if settings.LOG_TO_FILE:
            # Separate log file for each component
            component_log_file = os.path.join(settings.LOGS_DIR, f'{logger_name}.log')
            component_handler = logging.handlers.RotatingFileHandler(
                component_log_file,
                maxBytes=5*1024*1024,  # 5MB
                backupCount=3
            )
            component_handler.setLevel(level)
            component_handler.setFormatter(detailed_formatter)
            logger.addHandler(component_handler)

    _configured = True
    logging.debug("Logging configuration setup complete")


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the specified name"""
    return logging.getLogger(name)


# Setup logging when this module is imported
setup_logging()
