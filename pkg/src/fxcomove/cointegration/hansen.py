"""Hansen's joint parameter-constancy statistic ``L_C`` (regression coefficients plus variances)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError
from .vecm import VecmFit


@dataclass(frozen=True)
class HansenLcResult:
    lc_statistic: float
    parameter_count: int
    includes_variance: bool = True

    def to_dict(self) -> dict:
        return {
            "statistic": self.lc_statistic,
            "parameter_count": self.parameter_count,
            "includes_variance": self.includes_variance,
        }


def score_matrix(fit: VecmFit) -> np.ndarray:
    """Per-period scores ``f_t`` stacked over equations: ``[w_t e_it, e_it^2 - s_i^2]`` for each ``i``."""
    W, E = fit.design, fit.residuals
    blocks = []
    for i in range(E.shape[1]):
        e = E[:, i]
        blocks.append(W * e[:, None])
        blocks.append((e**2 - np.mean(e**2))[:, None])
    return np.hstack(blocks)


def hansen_lc(fit: VecmFit) -> HansenLcResult:
    """``L_C = (1/T) tr(V^{-1} sum_t S_t S_t')`` with ``S_t`` cumulative scores and ``V = sum_t f_t f_t'``."""
    f = score_matrix(fit)
    T, q = f.shape
    S = np.cumsum(f, axis=0)
    V = f.T @ f
    try:
        c = np.linalg.cholesky(V)
    except np.linalg.LinAlgError:
        raise NumericalError("score covariance is singular (collinear regressors?)") from None
    # tr(V^{-1} S'S) = ||c^{-1} S'||_F^2
    z = np.linalg.solve(c, S.T)
    lc = float(np.sum(z * z) / T)
    return HansenLcResult(lc_statistic=max(lc, 0.0), parameter_count=q)
