"""Application configuration."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(env_prefix="QNUCLEUS_", case_sensitive=False)

    # Parallelism (QNUCLEUS_THREADS caps every worker pool)
    threads: int = 4

    # Levi forms
    tau: float = 1e-7
    fd_step: float = 1e-3
    activity_gap: float = 1e-6

    # Hats
    hat_margin: float = 0.05
    membership_tol: float = 1e-9

    # Cuts
    max_iter: int = 50
    exhaustion_depth: int = 4
    exhaustion_growth: float = 1.5

    # Bump surrogate
    growth: float = 4.0
    offset: float = 4.0
    validation_radius: float = 2.0
    exclusion_tube: float = 1e-6

    # Gluing
    scaling_margin: float = 0.5
    seam_tol: float = 1e-6

    # Verification probes
    surface_samples: int = 4096
    filled_samples: int = 4096
    t_steps: int = 64

    # Runs
    seed: int = 0
    output_dir: str = "./runs"

    # Logging
    log_level: str = "INFO"

    @property
    def worker_count(self) -> int:
        """Get the thread cap, never below one."""
        return max(1, self.threads)


def get_settings() -> Settings:
    """Get application settings instance."""
    return Settings()
