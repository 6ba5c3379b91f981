from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Environment
    ENVIRONMENT: str = "development"
    LOG_LEVEL: Optional[str] = None

    # Numerical tolerances
    POSITIVITY_TOL: float = 1e-10
    HERMITIAN_TOL: float = 1e-10
    TRACE_TOL: float = 1e-10
    REALIGNMENT_TOL: float = 1e-10
    RANK_TOL: float = 1e-8
    GAMMA_TOL: float = 1e-10
    NORMALIZATION_TOL: float = 1e-8
    CROSS_CHECK_TOL: float = 1e-10
    BISECTION_TOL: float = 1e-6

    # Randomized commands
    DEFAULT_SEED: int = 0
    BENCH_WORKERS: int = 4

    @property
    def log_level(self) -> str:
        """Resolve the effective log level."""
        if self.LOG_LEVEL:
            return self.LOG_LEVEL.upper()
        return "INFO" if self.ENVIRONMENT == "development" else "WARNING"

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
