"""Time-invariant VECM estimation by equation-wise least squares."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import ConfigError, NumericalError
from ..panel import Panel
from .design import ecm_design
from .hac import default_bandwidth, newey_west_cov
from .johansen import VecmSpec


@dataclass(frozen=True)
class VecmFit:
    """Least-squares VECM fit; ``coef[:, i]`` are the coefficients of equation ``i``."""

    names: tuple[str, ...]
    regressor_names: tuple[str, ...]
    coef: np.ndarray  # p x m
    se: np.ndarray  # p x m, Newey-West
    design: np.ndarray  # T_eff x p
    response: np.ndarray  # T_eff x m
    residuals: np.ndarray  # T_eff x m
    adj_r2: np.ndarray
    bandwidth: int
    form: str
    lag_k: int
    beta: np.ndarray | None
    dates: tuple

    @property
    def fitted(self) -> np.ndarray:
        return self.design @ self.coef

    @property
    def effective_T(self) -> int:
        return self.design.shape[0]

    def _block(self, prefix: str) -> np.ndarray:
        idx = [i for i, n in enumerate(self.regressor_names) if n.startswith(prefix)]
        return self.coef[idx].T

    @property
    def gamma(self) -> np.ndarray:
        """``m x (m*k)`` lagged-difference coefficients ``[G_1, ..., G_k]``."""
        return self._block("d.")

    @property
    def alpha(self) -> np.ndarray:
        if self.form != "restricted":
            raise AttributeError("alpha is only defined for the restricted (beta given) form")
        return self._block("ec")

    @property
    def pi(self) -> np.ndarray:
        """Level coefficients: ``alpha beta'`` in the restricted form."""
        if self.form == "restricted":
            return self.alpha @ self.beta.T
        return self._block("l.")

    @property
    def intercept(self) -> np.ndarray | None:
        if "const" not in self.regressor_names:
            return None
        return self.coef[self.regressor_names.index("const")]

    def to_dict(self) -> dict:
        eqs = []
        for i, name in enumerate(self.names):
            eqs.append({
                "response": f"d.{name}",
                "coefficients": [
                    {"name": rn, "coef": float(self.coef[j, i]), "se": float(self.se[j, i])}
                    for j, rn in enumerate(self.regressor_names)
                ],
                "adj_r2": float(self.adj_r2[i]),
            })
        return {
            "form": self.form,
            "lag_k": self.lag_k,
            "effective_T": self.effective_T,
            "nw_bandwidth": self.bandwidth,
            "equations": eqs,
        }


def _check_rank(W: np.ndarray, names):
    _, r, piv = scipy.linalg.qr(W, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = diag[0] * max(W.shape) * np.finfo(float).eps if diag.size else 0.0
    bad = [names[piv[i]] for i in range(diag.size) if diag[i] <= tol]
    if bad:
        raise NumericalError(f"collinear regressors: {', '.join(bad)}")


def estimate_vecm(p: Panel, spec: VecmSpec = VecmSpec(), beta=None, bandwidth: int | None = None) -> VecmFit:
    """Equation-by-equation OLS of ``dX_t`` on lagged differences, an intercept and levels.

    Without ``beta`` every level ``X_{t-k}`` enters as its own regressor
    (unrestricted form). With an ``m x r`` ``beta`` the level block is
    replaced by the error-correction terms ``beta' X_{t-k}``.
    """
    X = p.values
    T, m = X.shape
    spec.validate(T, m)
    d = ecm_design(X, spec.lag_k, list(p.names))
    n = d.T_eff
    blocks = [d.lagged_diffs]
    names = list(d.lag_names)
    if spec.deterministic == "intercept":
        blocks.append(np.ones((n, 1)))
        names.append("const")
    if beta is None:
        blocks.append(d.levels)
        names.extend(f"l.{nm}" for nm in p.names)
        form = "unrestricted"
    else:
        beta = np.asarray(beta, dtype=float)
        if beta.ndim == 1:
            beta = beta[:, None]
        if beta.shape[0] != m or np.linalg.matrix_rank(beta) < beta.shape[1]:
            raise ConfigError(f"beta must be m x r with full column rank, got shape {beta.shape}")
        blocks.append(d.levels @ beta)
        names.extend(f"ec{j + 1}" for j in range(beta.shape[1]))
        form = "restricted"
    W = np.hstack(blocks)
    _check_rank(W, names)
    Y = d.response
    coef, *_ = np.linalg.lstsq(W, Y, rcond=None)
    resid = Y - W @ coef

    L = default_bandwidth(n) if bandwidth is None else bandwidth
    se = np.empty_like(coef)
    for i in range(m):
        se[:, i] = np.sqrt(np.clip(np.diag(newey_west_cov(W, resid[:, i], L)), 0.0, None))

    k = W.shape[1]
    rss = np.sum(resid**2, axis=0)
    if spec.deterministic == "intercept":
        tss = np.sum((Y - Y.mean(axis=0)) ** 2, axis=0)
        adj = 1.0 - (rss / (n - k)) / (tss / (n - 1))
    else:
        tss = np.sum(Y**2, axis=0)
        adj = 1.0 - (rss / (n - k)) / (tss / n)
    return VecmFit(
        names=p.names,
        regressor_names=tuple(names),
        coef=coef,
        se=se,
        design=W,
        response=Y,
        residuals=resid,
        adj_r2=adj,
        bandwidth=L,
        form=form,
        lag_k=spec.lag_k,
        beta=beta,
        dates=tuple(p.dates[i] for i in d.rows),
    )
