from pathlib import Path
import logging

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class EchoSettings(BaseSettings):
    """Runtime settings that are set using GAMMA_ECHO_* environment variables."""

    model_config = SettingsConfigDict(env_prefix="GAMMA_ECHO_")

    log_level: str = "INFO"

    # Worker threads used by the sweep commands
    max_workers: int = 4

    # Time samples per vectorised echo block
    chunk_size: int = 4096

    # Relative --out paths are resolved against this directory
    output_dir: Path = Path(".")

    @field_validator("log_level", mode="before")
    def normalise_log_level(cls, log_level: str) -> str:
        level = str(log_level).upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {log_level}")
        return level


# Create EchoSettings object
echo_settings = EchoSettings()
