"""
Configuration settings for hqvi.
Solver, interpolation and equivariant-limit tolerances, all overridable from the environment.
"""

from enum import Enum
from typing import List, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Precision(str, Enum):
    """Floating precision used for endpoint polishing, evaluation and fitting."""
    F64 = "f64"
    DD = "dd"


class Method(str, Enum):
    """Homotopy used to reach the solutions of the Bethe system."""
    DEGENERATION = "degeneration"
    EQUIVARIANT = "equivariant"


class SolverSettings(BaseSettings):
    """Path tracking configuration."""
    model_config = SettingsConfigDict(env_prefix="HQVI_SOLVER_")

    residual_factor: float = Field(default=1e-10, description="tol_resid = factor * (1 + max|q|)")
    separation_factor: float = Field(default=1e-6, description="tol_sep = factor * (1 + max|z|)")
    track_tolerance: float = Field(default=1e-9, description="Relative Newton tolerance at tracking nodes")

    initial_step: float = Field(default=0.01, description="First step along the arc")
    max_step: float = Field(default=0.1, description="Largest step along the arc")
    min_step: float = Field(default=1e-12, description="Hard minimum step")
    step_growth: float = Field(default=1.5, description="Step growth factor")
    growth_after: int = Field(default=3, description="Consecutive successes before growing")
    max_steps: int = Field(default=10000, description="Step limit per path")
    corrector_iterations: int = Field(default=3, description="Newton iterations per node")
    polish_iterations: int = Field(default=30, description="Newton iterations at the endpoint")
    extended_polish_iterations: int = Field(default=8, description="Newton iterations in dd mode")

    retries: int = Field(default=3, description="Fresh-arc retries for failed paths")
    divergence_radius: float = Field(default=1e8, description="Paths beyond this norm diverged")
    arc_bow: float = Field(default=0.3, description="Imaginary bow of the randomized arc")


class FitSettings(BaseSettings):
    """Interpolation configuration."""
    model_config = SettingsConfigDict(env_prefix="HQVI_FIT_")

    oversample: int = Field(default=2, description="Extra fitting samples beyond the support size")
    holdout: int = Field(default=2, description="Held-out verification samples")
    rounding_gate: float = Field(default=1e-3, description="Relative distance to the nearest integer")
    residual_gate: float = Field(default=1e-6, description="Relative held-out residual")
    spread_limit: float = Field(default=1e8, description="Max/min monomial magnitude over the support")
    radius_min: float = Field(default=0.5, description="Smallest sampling radius")
    radius_max: float = Field(default=2.0, description="Largest sampling radius")
    retries: int = Field(default=3, description="Reseeded attempts per precision")
    auto_escalate: bool = Field(default=True, description="Retry in dd precision when f64 rounding fails")
    j_floor: float = Field(default=1e-12, description="Minimum |J| at genus 0")


class EquivariantSettings(BaseSettings):
    """Equivariant limit configuration."""
    model_config = SettingsConfigDict(env_prefix="HQVI_EQUIVARIANT_")

    direction_norm: float = Field(default=1e-2, description="Norm of the seeded epsilon direction")
    richardson_scales: List[float] = Field(
        default=[1.0, 0.5, 0.25],
        description="Epsilon scales extrapolated to zero"
    )


class Settings(BaseSettings):
    """Main application settings."""
    model_config = SettingsConfigDict(
        env_prefix="HQVI_",
        extra="ignore"
    )

    # Nested settings
    solver: SolverSettings = Field(default_factory=SolverSettings)
    fit: FitSettings = Field(default_factory=FitSettings)
    equivariant: EquivariantSettings = Field(default_factory=EquivariantSettings)

    # Application settings
    log_level: str = Field(default="WARNING", description="Logging level")
    log_to_file: bool = Field(default=False, description="Also write rotating log files")
    log_dir: str = Field(default="logs", description="Directory for log files")

    seed: Optional[int] = Field(default=None, description="Fallback seed (HQVI_SEED)")
    threads: Optional[int] = Field(default=None, description="Worker pool size (default: logical cores)")
    precision: Precision = Field(default=Precision.F64, description="Starting precision")
    schema_version: str = Field(default="hqvi/1", description="Output schema tag")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Invalid log level: {v}")
        return v.upper()

    @property
    def default_seed(self) -> int:
        """Seed used when neither a flag nor HQVI_SEED is given."""
        return self.seed if self.seed is not None else 0


# Global settings instance
settings = Settings()
