from pydantic_settings import BaseSettings
from pydantic import Field, field_validator
from typing import Optional
import os


class Settings(BaseSettings):
    threads: int = Field(default=0, description="Thread cap for per-degree maps (0 = cpu count); only numpy work overlaps")
    max_basis_size: int = Field(default=20000, description="Largest monomial basis allowed in one degree")

    default_max_degree: int = Field(default=32, description="Internal degree cap N when a command omits it")
    default_window: int = Field(default=13, description="Column window for Tate pages")

    bar_max_degree: int = Field(default=12, description="Largest internal degree for the bar-complex oracle")
    bar_max_length: int = Field(default=6, description="Largest bar length s for the bar-complex oracle")

    slow_threshold_ms: int = Field(default=100, description="Operations slower than this are logged as slow")

    log_level: str = Field(default="WARNING", description="Logging level (DEBUG, INFO, WARNING, ERROR)")
    log_format: str = Field(default="console", description="Log format (console or json)")
    log_file: Optional[str] = Field(default=None, description="Optional log file path")
    environment: str = Field(default="development", description="Environment (development, ci, production)")

    class Config:
        env_prefix = "TATEFORGE_"
        env_file = ".env"
        case_sensitive = False
        env_file_encoding = 'utf-8'
        extra = 'ignore'

    @field_validator("threads", "max_basis_size", "bar_max_degree", "bar_max_length")
    @classmethod
    def validate_non_negative(cls, v):
        if v < 0:
            raise ValueError("must be non-negative")
        return v

    @field_validator("default_max_degree")
    @classmethod
    def validate_max_degree(cls, v):
        if v < 8:
            raise ValueError("default_max_degree must be at least 8")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        v = v.upper()
        if v not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
            raise ValueError(f"unknown log level {v}")
        return v

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v):
        v = v.lower()
        if v not in {"console", "json"}:
            raise ValueError("log_format must be console or json")
        return v

    @property
    def worker_count(self) -> int:
        return self.threads or (os.cpu_count() or 1)


settings = Settings()
