"""
Configuration module for hqvi.
"""

from .settings import (
    Settings,
    settings,
    Precision,
    Method,
    SolverSettings,
    FitSettings,
    EquivariantSettings,
)
from .logger import LevelColorFormatter, logger, get_logger, setup_logging

__all__ = [
    "Settings",
    "settings",
    "Precision",
    "Method",
    "SolverSettings",
    "FitSettings",
    "EquivariantSettings",
    "logger",
    "get_logger",
    "setup_logging",
    "LevelColorFormatter",
]
