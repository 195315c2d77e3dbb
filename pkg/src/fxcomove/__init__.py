"""Cointegration analysis of exchange-rate panels with time-varying error correction.

Subpackages and modules follow the analysis order: :mod:`panel` (ingestion,
transforms, descriptive statistics), :mod:`unitroot` (ADF-GLS),
:mod:`cointegration` (Johansen, VECM, Newey-West, Hansen ``L_C``),
:mod:`stability` (rank-change scans), :mod:`tvvecm` (random-walk coefficient
paths and the comovement degree) and :mod:`simulate`.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ComputationError,
    ConfigError,
    DomainError,
    FxComoveError,
    IngestionError,
    InputError,
    NumericalError,
    SimulationError,
    SizeError,
)
from .panel import Panel, describe, first_difference, load_panel_csv, log_transform  # noqa: E402

__all__ = [
    "ComputationError",
    "ConfigError",
    "DomainError",
    "FxComoveError",
    "IngestionError",
    "InputError",
    "NumericalError",
    "Panel",
    "SimulationError",
    "SizeError",
    "describe",
    "first_difference",
    "load_panel_csv",
    "log_transform",
]
