"""
Core configuration settings for the LM cost toolkit
Environment-based configuration with enumeration and worker settings
"""

import os
from functools import lru_cache
from typing import Optional
from pydantic_settings import BaseSettings
from pydantic import field_validator


class Settings(BaseSettings):
    """Toolkit settings, read from the environment with the LMCOST_ prefix"""

    # Application settings
    APP_NAME: str = "LM Cost Toolkit"
    APP_VERSION: str = "1.0.0"
    ENVIRONMENT: str = "development"
    DEBUG: bool = False

    # Logging settings
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    LOG_FILE: Optional[str] = None

    # Worker pool (None means one worker per available core)
    WORKERS: Optional[int] = None

    # Game size limits
    MAX_PLAYERS: int = 16
    MAX_ENUMERATION_PLAYERS: int = 7
    ENABLE_LARGE_ENUMERATION: bool = False  # unlocks n = 8
    SPLIT_DEPTH: int = 2

    # Output settings
    DEFAULT_DECIMALS: int = 0
    DEFAULT_OUTPUT_FORMAT: str = "human"

    @field_validator("WORKERS", mode="before")
    @classmethod
    def parse_workers(cls, v):
        if v is None or (isinstance(v, str) and not v.strip()):
            return None
        workers = int(v)
        if workers < 1:
            raise ValueError("WORKERS must be at least 1")
        return workers

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        if isinstance(v, str):
            return v.strip().upper()
        return v

    @field_validator("DEFAULT_OUTPUT_FORMAT")
    @classmethod
    def validate_output_format(cls, v):
        if v not in ("human", "csv", "jsonl"):
            raise ValueError("DEFAULT_OUTPUT_FORMAT must be one of human, csv, jsonl")
        return v

    @property
    def worker_count(self) -> int:
        """Resolved worker count"""
        return self.WORKERS or os.cpu_count() or 1

    @property
    def enumeration_limit(self) -> int:
        """Largest n the enumeration services accept"""
        return 8 if self.ENABLE_LARGE_ENUMERATION else self.MAX_ENUMERATION_PLAYERS

    model_config = {
        "env_prefix": "LMCOST_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": True,
        "extra": "ignore"
    }


class DevelopmentSettings(Settings):
    """Development environment settings"""
    DEBUG: bool = True


class ProductionSettings(Settings):
    """Batch runs on shared machines"""
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"


class TestingSettings(Settings):
    """Testing environment settings"""
    DEBUG: bool = True
    LOG_LEVEL: str = "WARNING"
    WORKERS: Optional[int] = 1


@lru_cache()
def get_settings() -> Settings:
    """Get toolkit settings based on environment"""
    environment = os.getenv("LMCOST_ENVIRONMENT", "development").lower()

    if environment == "production":
        return ProductionSettings()
    elif environment == "testing":
        return TestingSettings()
    else:
        return DevelopmentSettings()


# Export settings instance
settings = get_settings()
