"""
Logging Configuration Module

One application logger with a child per component, e.g.
QuantumMachineSimulator.dynamics, so that log lines name the physics module
that emitted them while sharing the handlers configured here.
"""

import logging
import logging.handlers
import os
from pathlib import Path
from datetime import datetime
from typing import Optional
import yaml


LOGGER_NAME = "QuantumMachineSimulator"
DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class LoggerConfig:
    """Configure application-wide logging"""

    _logger = None

    @staticmethod
    def setup_logging(config_path: str, log_dir: str, quiet: bool = False) -> logging.Logger:
        """
        Setup logging from the `logging` section of config.yaml

        Args:
            config_path: Path to config.yaml
            log_dir: Directory for the rotating simulator log
            quiet: Only warnings and errors reach the console; the log file keeps everything

        Returns:
            Configured application logger
        """
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f) or {}

        log_config = config.get('logging', {}) or {}
        level = os.environ.get('QTM_LOG_LEVEL') or log_config.get('level', 'INFO')
        formatter = logging.Formatter(log_config.get('format', DEFAULT_FORMAT))

        logger = logging.getLogger(LOGGER_NAME)
        logger.setLevel(getattr(logging, str(level).upper()))
        logger.handlers.clear()
        logger.propagate = False

        if log_config.get('console_output', True):
            console_handler = logging.StreamHandler()
            console_handler.setFormatter(formatter)
            if quiet:
                console_handler.setLevel(logging.WARNING)
            logger.addHandler(console_handler)

        if log_config.get('file_output', True):
            Path(log_dir).mkdir(parents=True, exist_ok=True)
            log_filename = os.path.join(log_dir, f"simulator_{datetime.now().strftime('%Y%m%d')}.log")
            file_handler = logging.handlers.RotatingFileHandler(
                log_filename,
                maxBytes=10485760,  # 10MB
                backupCount=5
            )
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        LoggerConfig._logger = logger
        return logger

    @staticmethod
    def get_logger(component: Optional[str] = None) -> logging.Logger:
        """
        Application logger, or its child for one component

        Args:
            component: Module name such as 'src.core.dynamics'; only the last
                dotted part is kept

        Returns:
            Logger that propagates to the application handlers
        """
        if LoggerConfig._logger is None:
            logging.basicConfig(level=logging.INFO, format=DEFAULT_FORMAT)
            LoggerConfig._logger = logging.getLogger(LOGGER_NAME)
        if not component:
            return LoggerConfig._logger
        return LoggerConfig._logger.getChild(component.rsplit('.', 1)[-1])
