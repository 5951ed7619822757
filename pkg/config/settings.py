"""
Configuration management using Pydantic Settings.
Loads QLW_* environment variables and validates them at startup.
"""

from pathlib import Path
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide numerical and output settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="QLW_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Reproducibility
    seed: int = Field(default=42, description="RNG seed for sampled norm estimates")

    # Numerical tolerances
    axiom_tol: float = Field(default=1e-9, gt=0, description="Bialgebra/representation axiom tolerance")
    noise_floor: float = Field(
        default=1e-13, gt=0, description="Errors below this are excluded from slope fits"
    )
    gns_relative_cut: float = Field(
        default=1e-10, gt=0, description="GNS null-space cut relative to the largest Gram eigenvalue"
    )

    # Walk evaluation
    dense_cap: int = Field(default=4096, ge=1, description="Max matrix dimension for the dense walk path")
    norm_samples: int = Field(default=200, ge=0, description="Random samples in map_norm_estimate")

    # Reports
    report_output_dir: Path = Field(
        default=Path("./reports"), description="Directory for generated reports"
    )
    record_timings: bool = Field(
        default=False, description="Write wall-clock timings into reports (breaks byte-identity)"
    )
    log_level: str = Field(default="INFO", description="Logging level")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Ensure log level is one the logging module knows."""
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Invalid log level: {v}")
        return level

    @field_validator("report_output_dir", mode="before")
    @classmethod
    def create_output_dir(cls, v: str | Path) -> Path:
        """Ensure output directory exists."""
        path = Path(v)
        path.mkdir(parents=True, exist_ok=True)
        return path


# Singleton instance
settings = Settings()


if __name__ == "__main__":
    from rich import print as rprint

    rprint("[bold green]✓ Configuration loaded successfully![/bold green]")
    rprint(f"Seed: {settings.seed}")
    rprint(f"Dense cap: {settings.dense_cap}")
    rprint(f"Output dir: {settings.report_output_dir}")
