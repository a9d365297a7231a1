"""
Centralized Configuration Management

This module provides centralized configuration management for the Upsilon
toolkit. It handles environment variables, computation limits, output
settings and logging in one place so every module reads the same values.
"""

import os
import logging
from typing import Optional, Dict, Any
from dataclasses import dataclass, field
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# The brute-force oracle enumerates 2**dim cycles; never allow more than this.
ORACLE_HARD_CAP = 22


@dataclass
class ComputeConfig:
    """Limits and knobs for the Upsilon computations."""
    window_slack: int = 2
    stability_growth: int = 2
    oracle_cap: int = ORACLE_HARD_CAP
    suite_oracle_cap: int = 12
    sample_count: int = 64
    parallel_workers: int = 1


@dataclass
class OutputConfig:
    """Output formatting settings."""
    emit: str = "json"
    indent: int = 2
    allowed_formats: list = field(default_factory=lambda: ["json", "csv"])


@dataclass
class LoggingConfig:
    """Logging configuration settings."""
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file_path: Optional[str] = None


class Config:
    """
    Centralized configuration management class.

    This class provides a single source of truth for all configuration
    parameters used throughout the toolkit.
    """

    def __init__(self) -> None:
        """Initialize configuration with default values and environment overrides."""
        self.logging = LoggingConfig(
            level=self._get_env_var("UPS_LOG_LEVEL", "INFO").upper(),
            format=self._get_env_var(
                "UPS_LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
            ),
            file_path=os.getenv("UPS_LOG_FILE"),
        )
        self._setup_logging()

        self.compute = ComputeConfig(
            window_slack=self._get_int("UPS_WINDOW_SLACK", 2, minimum=0),
            stability_growth=self._get_int("UPS_STABILITY_GROWTH", 2, minimum=1),
            oracle_cap=self._get_int("UPS_ORACLE_CAP", ORACLE_HARD_CAP, minimum=0),
            suite_oracle_cap=self._get_int("UPS_SUITE_ORACLE_CAP", 12, minimum=0),
            sample_count=self._get_int("UPS_SAMPLE_COUNT", 64, minimum=1),
            parallel_workers=self._get_int("UPS_WORKERS", 1, minimum=1),
        )
        if self.compute.oracle_cap > ORACLE_HARD_CAP:
            raise ValueError(
                f"UPS_ORACLE_CAP={self.compute.oracle_cap} exceeds the hard cap {ORACLE_HARD_CAP}"
            )

        self.output = OutputConfig(
            emit=self._get_env_var("UPS_EMIT", "json").lower(),
            indent=self._get_int("UPS_JSON_INDENT", 2, minimum=0),
        )
        if self.output.emit not in self.output.allowed_formats:
            raise ValueError(f"UPS_EMIT must be one of {self.output.allowed_formats}, got '{self.output.emit}'")

    def _get_env_var(self, key: str, default: Optional[str] = None) -> str:
        """
        Get environment variable with fallback to default value.

        Args:
            key: Environment variable name
            default: Default value if environment variable is not set

        Returns:
            Environment variable value or default

        Raises:
            ValueError: If required environment variable is missing
        """
        value = os.getenv(key, default)
        if value is None:
            raise ValueError(f"Required environment variable '{key}' is not set")
        return value

    def _get_int(self, key: str, default: int, minimum: int) -> int:
        """Read an integer environment variable and check its lower bound."""
        raw = self._get_env_var(key, str(default))
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"Environment variable '{key}' must be an integer, got '{raw}'")
        if value < minimum:
            raise ValueError(f"Environment variable '{key}' must be >= {minimum}, got {value}")
        return value

    def _setup_logging(self) -> None:
        """Setup logging configuration. Logs go to stderr, payloads to stdout."""
        handlers: list = [logging.StreamHandler()]
        if self.logging.file_path:
            handlers.append(logging.FileHandler(self.logging.file_path))

        logging.basicConfig(
            level=getattr(logging, self.logging.level, logging.INFO),
            format=self.logging.format,
            handlers=handlers,
        )

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert configuration to dictionary.

        Returns:
            Dictionary representation of configuration
        """
        return {
            "compute": {
                "window_slack": self.compute.window_slack,
                "stability_growth": self.compute.stability_growth,
                "oracle_cap": self.compute.oracle_cap,
                "suite_oracle_cap": self.compute.suite_oracle_cap,
                "sample_count": self.compute.sample_count,
                "parallel_workers": self.compute.parallel_workers,
            },
            "output": {
                "emit": self.output.emit,
                "indent": self.output.indent,
            },
            "logging": {
                "level": self.logging.level,
                "format": self.logging.format,
                "file_path": self.logging.file_path,
            },
        }


# Global configuration instance
config = Config()
