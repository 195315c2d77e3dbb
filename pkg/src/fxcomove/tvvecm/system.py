"""Stacked regression for random-walk coefficient paths.

Each equation ``i`` of the error-correction form is written as

    y_{i,t} = z_t' b_{i,t} + c_i + e_{i,t},    b_{i,t} = b_{i,t-1} + u_{i,t}

and estimated by minimising ``||y - Z b||^2 + lambda^2 ||D b||^2`` where ``D``
takes first differences of consecutive coefficient blocks. ``lambda`` is the
ratio of the observation to the innovation standard deviation: large values
force constant paths. All equations share the regressor rows ``z_t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from ..cointegration.design import ecm_design
from ..errors import ConfigError, SizeError
from ..panel import Panel


@dataclass(frozen=True)
class TvVecmConfig:
    beta: np.ndarray
    lag_k: int = 1
    smoothness_lambda: float = 1.0
    intercept_mode: Literal["constant", "time-varying"] = "constant"

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float)
        if beta.ndim == 1:
            beta = beta[:, None]
        if beta.ndim != 2 or beta.shape[1] < 1 or np.linalg.matrix_rank(beta) < beta.shape[1]:
            raise ConfigError(f"beta must be an m x r matrix of full column rank, got shape {beta.shape}")
        if not self.smoothness_lambda > 0:
            raise ConfigError("smoothness_lambda must be positive")
        if self.lag_k < 1:
            raise ConfigError("lag_k must be >= 1")
        if self.intercept_mode not in ("constant", "time-varying"):
            raise ConfigError(f"unknown intercept_mode {self.intercept_mode!r}")
        object.__setattr__(self, "beta", beta)

    def with_lambda(self, lam: float) -> "TvVecmConfig":
        return TvVecmConfig(self.beta, self.lag_k, lam, self.intercept_mode)


@dataclass(frozen=True)
class StackedSystem:
    """Shared design ``regressors`` (``T x p``), responses (``T x n_eq``) and penalty weight.

    With ``shared_intercept`` every equation also has one constant intercept
    that is not penalised. Column index tuples locate the loading (``alpha``)
    and lagged-difference (``gamma``) coefficients inside each block.
    """

    response: np.ndarray
    regressors: np.ndarray
    smoothness_lambda: float
    shared_intercept: bool = False
    coef_names: tuple = ()
    alpha_cols: tuple = ()
    gamma_cols: tuple = ()
    dates: tuple = ()
    names: tuple = ()

    def __post_init__(self):
        y = np.asarray(self.response, dtype=float)
        Z = np.asarray(self.regressors, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        if Z.ndim == 1:
            Z = Z[:, None]
        if y.shape[0] != Z.shape[0]:
            raise SizeError(f"{y.shape[0]} responses but {Z.shape[0]} regressor rows")
        if y.shape[0] < 1:
            raise SizeError("system needs at least one period")
        if not self.smoothness_lambda > 0:
            raise ConfigError("smoothness_lambda must be positive")
        object.__setattr__(self, "response", y)
        object.__setattr__(self, "regressors", Z)
        if not self.coef_names:
            object.__setattr__(self, "coef_names", tuple(f"z{j}" for j in range(Z.shape[1])))
        if not self.dates:
            object.__setattr__(self, "dates", tuple(range(y.shape[0])))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"y{i}" for i in range(y.shape[1])))

    @property
    def n_periods(self) -> int:
        return self.regressors.shape[0]

    @property
    def n_coef(self) -> int:
        return self.regressors.shape[1]

    @property
    def n_eq(self) -> int:
        return self.response.shape[1]

    @property
    def n_unknowns(self) -> int:
        """Unknowns per equation: ``T*p`` path entries plus the shared intercept."""
        return self.n_periods * self.n_coef + int(self.shared_intercept)

    def observation_operator(self) -> sp.csr_matrix:
        """``T x n_unknowns`` map from stacked coefficients to fitted values."""
        T, p = self.regressors.shape
        rows = np.repeat(np.arange(T), p)
        cols = np.arange(T * p)
        vals = self.regressors.ravel()
        if self.shared_intercept:
            rows = np.concatenate([rows, np.arange(T)])
            cols = np.concatenate([cols, np.full(T, T * p)])
            vals = np.concatenate([vals, np.ones(T)])
        return sp.csr_matrix((vals, (rows, cols)), shape=(T, self.n_unknowns))

    def penalty_operator(self) -> sp.csr_matrix:
        """``(T-1)p x n_unknowns`` first-difference operator; the intercept column is zero."""
        T, p = self.regressors.shape
        n = (T - 1) * p
        r = np.arange(n)
        rows = np.concatenate([r, r])
        cols = np.concatenate([r + p, r])
        vals = np.concatenate([np.ones(n), -np.ones(n)])
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, self.n_unknowns))

    def stacked_matrix(self) -> sp.csr_matrix:
        """Observation rows on top of ``lambda``-weighted penalty rows."""
        return sp.vstack([self.observation_operator(), self.smoothness_lambda * self.penalty_operator()]).tocsr()

    def stacked_response(self) -> np.ndarray:
        pad = np.zeros(((self.n_periods - 1) * self.n_coef, self.n_eq))
        return np.vstack([self.response, pad])


def design_rows(X: np.ndarray, config: TvVecmConfig, names=None):
    """Time-varying regressor rows ``[dX_{t-1..t-k}, beta'X_{t-k} (, 1)]`` and their names."""
    d = ecm_design(X, config.lag_k, names)
    r = config.beta.shape[1]
    blocks = [d.lagged_diffs, d.levels @ config.beta]
    coef_names = list(d.lag_names) + [f"ec{j + 1}" for j in range(r)]
    if config.intercept_mode == "time-varying":
        blocks.append(np.ones((d.T_eff, 1)))
        coef_names.append("const")
    return d, np.hstack(blocks), tuple(coef_names)


def build_stacked_system(p: Panel, config: TvVecmConfig) -> StackedSystem:
    """Stack every equation of the panel's error-correction form into one penalised problem."""
    if config.beta.shape[0] != p.m:
        raise SizeError(f"beta has {config.beta.shape[0]} rows for a {p.m}-series panel")
    d, Z, coef_names = design_rows(p.values, config, list(p.names))
    mk = p.m * config.lag_k
    r = config.beta.shape[1]
    return StackedSystem(
        response=d.response,
        regressors=Z,
        smoothness_lambda=config.smoothness_lambda,
        shared_intercept=config.intercept_mode == "constant",
        coef_names=coef_names,
        alpha_cols=tuple(range(mk, mk + r)),
        gamma_cols=tuple(range(mk)),
        dates=tuple(p.dates[i] for i in d.rows),
        names=p.names,
    )
