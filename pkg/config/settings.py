"""
Configuration settings using Pydantic for validation and type safety.
"""
from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):
    """Engine settings with validation."""

    model_config = SettingsConfigDict(
        env_prefix="FIBCAT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Parallelism
    threads: int = Field(
        default=1, ge=1, le=64, description="Maximum number of parallel suite workers"
    )

    # Logging
    log_level: str = Field(default="WARNING", description="Logging level")
    log_file: Optional[str] = Field(default=None, description="Optional log file path")

    # Reports
    report_format: str = Field(default="json", description="Default report format")
    include_timings: bool = Field(
        default=False, description="Add wall-clock timings to reports"
    )

    # Corpus generation
    default_seed: int = Field(default=7, ge=0, description="Seed used when --seed is absent")
    mutation_count: int = Field(
        default=100, ge=1, le=10000, description="Mutations emitted by --gen mutate"
    )
    corpus_dir: str = Field(default="corpus", description="Default corpus output directory")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalise and validate the log level name."""
        level = v.strip().upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"Invalid log level: {v}")
        return level

    @field_validator("report_format")
    @classmethod
    def validate_report_format(cls, v: str) -> str:
        """Validate the report format."""
        fmt = v.strip().lower()
        if fmt not in ("json", "text"):
            raise ValueError(f"Invalid report format: {v}")
        return fmt

    @property
    def corpus_path(self) -> Path:
        """Corpus directory as a path."""
        return Path(self.corpus_dir)

    def ensure_directories(self) -> None:
        """Ensure the log directory exists when file logging is enabled."""
        if self.log_file:
            Path(self.log_file).parent.mkdir(parents=True, exist_ok=True)


# Global settings instance
settings = Settings()
