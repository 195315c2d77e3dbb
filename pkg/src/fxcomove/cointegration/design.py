"""Regressor construction for the error-correction form

    dX_t = G_1 dX_{t-1} + ... + G_k dX_{t-k} + Pi X_{t-k} + mu + e_t

Rows run over ``t = k+1, ..., T-1`` (0-based), so ``T_eff = T - k - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, SizeError


@dataclass(frozen=True)
class EcmDesign:
    response: np.ndarray  # T_eff x m, dX_t
    lagged_diffs: np.ndarray  # T_eff x (m*k), [dX_{t-1}, ..., dX_{t-k}]
    levels: np.ndarray  # T_eff x m, X_{t-k}
    rows: np.ndarray  # panel row index of each observation
    lag_names: tuple[str, ...]

    @property
    def T_eff(self) -> int:
        return self.response.shape[0]


def ecm_design(X: np.ndarray, lag_k: int, names=None) -> EcmDesign:
    X = np.asarray(X, dtype=float)
    T, m = X.shape
    if lag_k < 1:
        raise ConfigError("lag_k must be a positive integer")
    T_eff = T - lag_k - 1
    if T_eff < 1:
        raise SizeError(f"T={T} too short for lag_k={lag_k}")
    names = names or [f"x{j}" for j in range(m)]
    dX = np.diff(X, axis=0)  # dX[s] = X[s+1] - X[s]
    rows = np.arange(lag_k + 1, T)
    response = dX[rows - 1]
    lagged = np.hstack([dX[rows - 1 - j] for j in range(1, lag_k + 1)])
    levels = X[rows - lag_k]
    lag_names = tuple(f"d.{n}.L{j}" for j in range(1, lag_k + 1) for n in names)
    return EcmDesign(response, lagged, levels, rows, lag_names)
