"""Newey-West heteroskedasticity and autocorrelation consistent covariance."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError, NumericalError, SizeError


def default_bandwidth(T: int) -> int:
    """``floor(4 * (T/100)^(2/9))``."""
    return int(math.floor(4.0 * (T / 100.0) ** (2.0 / 9.0)))


def newey_west_cov(regressors, residuals, bandwidth: int | None = None) -> np.ndarray:
    """Sandwich covariance of OLS coefficients with Bartlett weights ``1 - j/(L+1)``.

    No small-sample scaling is applied, so ``bandwidth=0`` gives White's
    HC0 estimator.
    """
    X = np.asarray(regressors, dtype=float)
    e = np.asarray(residuals, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if e.ndim != 1 or e.shape[0] != X.shape[0]:
        raise SizeError(f"{X.shape[0]} regressor rows but residuals have shape {e.shape}")
    T = X.shape[0]
    L = default_bandwidth(T) if bandwidth is None else int(bandwidth)
    if L < 0:
        raise ConfigError("bandwidth must be >= 0")
    u = X * e[:, None]
    meat = u.T @ u
    for j in range(1, min(L, T - 1) + 1):
        g = u[j:].T @ u[:-j]
        meat += (1.0 - j / (L + 1.0)) * (g + g.T)
    try:
        bread = np.linalg.inv(X.T @ X)
    except np.linalg.LinAlgError:
        raise NumericalError("regressor cross-product matrix is singular") from None
    cov = bread @ meat @ bread
    return 0.5 * (cov + cov.T)
