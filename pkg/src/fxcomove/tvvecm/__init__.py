"""Time-varying error-correction coefficients and the comovement degree."""

from .bootstrap import MIN_REPLICATIONS, BootstrapBands, bootstrap_bands, rebuild_levels
from .comovement import ComovementPath, centered_moving_average, comovement_degree, zeta_from_alpha
from .kalman import kalman_smoother_oracle
from .smoother import TvVecmFit, constant_path_fit, solve_smoothing
from .system import StackedSystem, TvVecmConfig, build_stacked_system, design_rows

__all__ = [
    "MIN_REPLICATIONS",
    "BootstrapBands",
    "ComovementPath",
    "StackedSystem",
    "TvVecmConfig",
    "TvVecmFit",
    "bootstrap_bands",
    "build_stacked_system",
    "centered_moving_average",
    "comovement_degree",
    "constant_path_fit",
    "design_rows",
    "kalman_smoother_oracle",
    "rebuild_levels",
    "solve_smoothing",
    "zeta_from_alpha",
]
