"""Cahn-Hilliard implicit Euler solver with Fourier spectral discretisation."""

from ._chstab import (
    CSV_HEADER,
    CheckpointError,
    ConfigError,
    CsvError,
    NonConvergence,
    Potential,
    SolverAbort,
    assumption_constants,
    check,
    concavity_bound,
    energy,
    initial_condition,
    read_checkpoint,
    read_csv,
    run,
    seminorm,
    step,
    step_bounds,
    uniform_gronwall_check,
    write_checkpoint,
)

__all__ = [
    "CSV_HEADER",
    "CheckpointError",
    "ConfigError",
    "CsvError",
    "NonConvergence",
    "Potential",
    "SolverAbort",
    "assumption_constants",
    "check",
    "concavity_bound",
    "energy",
    "initial_condition",
    "read_checkpoint",
    "read_csv",
    "run",
    "seminorm",
    "step",
    "step_bounds",
    "uniform_gronwall_check",
    "write_checkpoint",
]
