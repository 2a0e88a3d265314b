"""
Configuration Service

Holds run-wide settings read from TAGMETRICS_* environment variables:
worker processes, logging, reference units and prediction defaults.
"""

from pathlib import Path
from typing import Optional
from loguru import logger
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from models.prediction import EmptyProductionMode


class AppSettings(BaseSettings):
    """Application settings model."""

    model_config = SettingsConfigDict(env_prefix="TAGMETRICS_")

    threads: int = Field(default=1, ge=1, description="Worker processes for trial batches")
    log_level: str = "WARNING"
    log_file: Optional[Path] = None
    reference_length: float = Field(default=100.0, gt=0.0)
    measured_length: int = Field(default=1000, ge=1)
    oracle_symbols: int = Field(default=1_000_000, ge=1)
    tolerance: float = Field(default=1e-9, gt=0.0)
    empty_production_mode: EmptyProductionMode = EmptyProductionMode.GEOMETRIC
    growth_decimals: Optional[int] = Field(default=None, ge=0)


class ConfigService:
    """Service for accessing application configuration."""

    def __init__(self, settings: Optional[AppSettings] = None):
        self.settings = settings if settings is not None else self.load_settings()
        logger.info(
            f"ConfigService initialized with {self.settings.threads} worker(s), "
            f"reference length {self.settings.reference_length}"
        )

    def load_settings(self) -> AppSettings:
        """Load application settings from the environment."""
        try:
            return AppSettings()
        except Exception as e:
            logger.error(f"Invalid TAGMETRICS_* environment settings, using defaults: {e}")
            return AppSettings.model_construct()

    def get_thread_count(self) -> int:
        return self.settings.threads

    def get_reference_length(self) -> float:
        return self.settings.reference_length

    def get_measured_length(self) -> int:
        return self.settings.measured_length

    def get_oracle_symbols(self) -> int:
        return self.settings.oracle_symbols

    def get_tolerance(self) -> float:
        return self.settings.tolerance

    def get_empty_production_mode(self) -> EmptyProductionMode:
        return EmptyProductionMode(self.settings.empty_production_mode)

    def get_growth_decimals(self) -> Optional[int]:
        return self.settings.growth_decimals
