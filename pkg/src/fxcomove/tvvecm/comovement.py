"""Degree of comovement: the largest singular value of each period's loading matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, SizeError
from .smoother import TvVecmFit


@dataclass(frozen=True)
class ComovementPath:
    zeta: np.ndarray
    delta_zeta: np.ndarray
    dates: tuple
    smoothed_delta: np.ndarray | None = None
    smooth_window: int | None = None

    def to_dict(self) -> dict:
        out = {
            "dates": list(self.dates),
            "zeta": self.zeta.tolist(),
            "delta_zeta": self.delta_zeta.tolist(),
        }
        if self.smoothed_delta is not None:
            out["smoothed_delta_zeta"] = self.smoothed_delta.tolist()
            out["smooth_window"] = self.smooth_window
        return out


def zeta_from_alpha(alpha_path: np.ndarray) -> np.ndarray:
    """Spectral norm of every ``m x r`` matrix in a ``T x m x r`` stack."""
    a = np.asarray(alpha_path, dtype=float)
    if a.ndim == 2:
        a = a[None]
    if a.shape[0] == 0:
        raise SizeError("empty loading path")
    return np.linalg.norm(a, ord=2, axis=(1, 2))


def centered_moving_average(x: np.ndarray, window: int) -> np.ndarray:
    """Centred moving average with the window shrunk symmetrically near the ends."""
    if window < 1 or window % 2 == 0:
        raise ConfigError("smoothing window must be a positive odd integer")
    x = np.asarray(x, dtype=float)
    h = window // 2
    c = np.concatenate([[0.0], np.cumsum(x)])
    n = x.size
    idx = np.arange(n)
    half = np.minimum(np.minimum(idx, n - 1 - idx), h)
    lo, hi = idx - half, idx + half + 1
    return (c[hi] - c[lo]) / (hi - lo)


def comovement_degree(fit: TvVecmFit, smooth_window: int | None = None) -> ComovementPath:
    zeta = zeta_from_alpha(fit.alpha_path)
    delta = np.diff(zeta)
    smoothed = None
    if smooth_window is not None and delta.size:
        smoothed = centered_moving_average(delta, smooth_window)
    return ComovementPath(zeta, delta, tuple(fit.dates), smoothed, smooth_window)
