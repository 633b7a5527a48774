"""
Configuration management for cogcap.
"""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings (environment and ``.env``)."""

    # Reproducibility
    seed: Optional[int] = Field(
        default=None,
        validation_alias="COGCAP_SEED",
        description="Overrides master_seed of every trial plan when set.",
    )

    # Execution
    workers: int = Field(default=1, ge=1, validation_alias="COGCAP_WORKERS")
    default_trials: int = Field(
        default=20000, ge=1, validation_alias="COGCAP_DEFAULT_TRIALS"
    )
    max_region_radius: float = Field(
        default=5000.0,
        gt=0,
        validation_alias="COGCAP_MAX_REGION_RADIUS",
        description="Upper bound (m) on the auto-sized sampling disc.",
    )

    # Output
    results_root: str = Field(
        default="file://./results",
        validation_alias="COGCAP_RESULTS_ROOT",
        description="Base URI for result stores. Only file:// is supported.",
    )
    record_wall_time: bool = Field(
        default=False,
        validation_alias="COGCAP_RECORD_WALL_TIME",
        description="Fill the wall_time_s column. Off keeps artifacts byte-identical.",
    )

    # Logging
    log_level: str = Field(default="INFO", validation_alias="LOG_LEVEL")
    log_format: str = Field(default="console", validation_alias="LOG_FORMAT")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get runtime settings.

    Returns the module-level ``settings`` instance. To override in tests,
    patch ``config.settings`` directly or call :func:`reset_settings`.
    """
    return settings


def reset_settings() -> Settings:
    """Force re-creation of settings from the current environment."""
    global settings
    settings = Settings()
    return settings
