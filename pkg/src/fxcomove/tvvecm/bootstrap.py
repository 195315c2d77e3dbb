"""Residual-resampling bootstrap bands for the comovement path.

Each replication draws residual rows with replacement (keeping the cross-
equation correlation), rebuilds the panel recursively from the fitted time-
varying model starting at the observed initial rows, re-estimates and keeps
the resulting ``zeta`` path. Replication ``j`` uses its own spawned seed, so
results do not depend on the number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..panel import Panel
from ..simulate import spawn_seeds
from .comovement import zeta_from_alpha
from .smoother import TvVecmFit, solve_smoothing
from .system import TvVecmConfig, build_stacked_system

MIN_REPLICATIONS = 100


@dataclass(frozen=True)
class BootstrapBands:
    lower: np.ndarray
    upper: np.ndarray
    median: np.ndarray
    quantiles: tuple
    replications: int
    seed: int
    dates: tuple

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "dates": list(self.dates),
            "band_lo": self.lower.tolist(),
            "band_hi": self.upper.tolist(),
            "median": self.median.tolist(),
            "quantiles": list(self.quantiles),
            "replications": self.replications,
            "seed": self.seed,
        }


def rebuild_levels(X0: np.ndarray, fit: TvVecmFit, config: TvVecmConfig, shocks: np.ndarray) -> np.ndarray:
    """Run the fitted time-varying recursion forward from the first ``k+1`` observed rows."""
    k = config.lag_k
    T_eff = fit.n_periods
    m = X0.shape[1]
    X = np.empty((T_eff + k + 1, m))
    X[: k + 1] = X0[: k + 1]
    beta = config.beta
    c = fit.intercept if fit.intercept is not None else np.zeros(m)
    tv_const = config.intercept_mode == "time-varying"
    for j in range(T_eff):
        t = j + k + 1
        z = [X[t - i] - X[t - i - 1] for i in range(1, k + 1)]
        z.append(beta.T @ X[t - k])
        if tv_const:
            z.append(np.ones(1))
        zt = np.concatenate(z)
        X[t] = X[t - 1] + fit.coef_path[j] @ zt + c + shocks[j]
    return X


def _replicate(seed_seq, X0, fit, config, resid, names):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    idx = rng.integers(0, resid.shape[0], resid.shape[0])
    Xs = rebuild_levels(X0, fit, config, resid[idx])
    sys_b = build_stacked_system(Panel.from_array(Xs, names), config)
    return zeta_from_alpha(solve_smoothing(sys_b).alpha_path)


def bootstrap_bands(
    p: Panel,
    config: TvVecmConfig,
    replications: int = 200,
    seed: int = 0,
    quantiles: tuple = (0.05, 0.95),
    threads: int = 1,
    fit: TvVecmFit | None = None,
) -> BootstrapBands:
    if replications < MIN_REPLICATIONS:
        raise ConfigError(f"bootstrap needs at least {MIN_REPLICATIONS} replications, got {replications}")
    lo_q, hi_q = (float(q) for q in quantiles)
    if not 0 < lo_q < hi_q < 1:
        raise ConfigError("band quantiles must satisfy 0 < lower < upper < 1")
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    if fit is None:
        fit = solve_smoothing(build_stacked_system(p, config))
    resid = fit.residuals
    resid = resid - resid.mean(axis=0)
    X0 = p.values
    names = list(p.names)
    seeds = spawn_seeds(seed, replications)

    def run(s):
        return _replicate(s, X0, fit, config, resid, names)

    if threads == 1:
        draws = [run(s) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            draws = list(pool.map(run, seeds))
    draws = np.vstack(draws)
    lower, median, upper = np.quantile(draws, [lo_q, 0.5, hi_q], axis=0)
    return BootstrapBands(lower, upper, median, (lo_q, hi_q), replications, seed, tuple(fit.dates))
