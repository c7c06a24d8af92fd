from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from charflow import __version__


class Settings(BaseSettings):
    """All process-wide settings loaded from CHARFLOW_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="CHARFLOW_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    PROJECT_NAME: str = Field("charflow")
    VERSION: str = Field(__version__)
    ENV: str = Field("development")
    DEBUG: bool = Field(False)

    # Logging
    LOG_LEVEL: str = Field("WARNING")
    LOG_DIR: str | None = Field(None)

    # Parallelism cap for traces, grid fill and quadrature tiles
    THREADS: int = Field(1)

    @field_validator("THREADS")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        """Validate that the thread cap is positive."""
        if v < 1:
            raise ValueError("CHARFLOW_THREADS must be at least 1")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def _upper_level(cls, v: str) -> str:
        return v.upper()


# Singleton settings instance for package-wide import
settings = Settings()
