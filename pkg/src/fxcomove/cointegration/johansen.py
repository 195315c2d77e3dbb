"""Johansen reduced-rank regression and the trace / maximal-eigenvalue rank tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg

from ..errors import ConfigError, DomainError, NumericalError, SizeError
from ..panel import Panel
from .design import ecm_design
from .tables import LEVELS, johansen_critical_value


@dataclass(frozen=True)
class VecmSpec:
    """Lag depth ``k``, deterministic term and (optionally) a fixed rank.

    ``deterministic="intercept"`` restricts the constant to the cointegration
    space in the rank test (the long-run constant enters ``beta' X``). In the
    least-squares estimation it appears as an ordinary intercept column.
    """

    lag_k: int = 1
    deterministic: Literal["intercept", "none"] = "intercept"
    rank_r: int | None = None

    def __post_init__(self):
        if self.lag_k < 1:
            raise ConfigError("lag_k must be >= 1")
        if self.deterministic not in ("intercept", "none"):
            raise ConfigError(f"unknown deterministic spec {self.deterministic!r}")
        if self.rank_r is not None and self.rank_r < 0:
            raise ConfigError("rank_r must be nonnegative")

    def validate(self, T: int, m: int) -> None:
        if not self.lag_k < T / 4:
            raise ConfigError(f"lag_k={self.lag_k} must be below T/4={T / 4}")
        if self.rank_r is not None and not self.rank_r < m:
            raise ConfigError(f"rank_r={self.rank_r} must be below m={m}")


def maxeig_stat(lam: float, effective_T: int) -> float:
    """``-T ln(1 - lambda)``."""
    if not 0.0 <= lam < 1.0:
        raise DomainError(f"eigenvalue must lie in [0, 1), got {lam}")
    if effective_T < 1:
        raise SizeError("effective_T must be >= 1")
    return -effective_T * math.log1p(-lam)


def trace_stat(lambdas, null_rank: int, effective_T: int) -> float:
    """``-T * sum_{i > null_rank} ln(1 - lambda_i)`` over a descending eigenvalue list."""
    lambdas = list(lambdas)
    if not 0 <= null_rank < len(lambdas):
        raise DomainError(f"null_rank {null_rank} outside 0..{len(lambdas) - 1}")
    return math.fsum(maxeig_stat(lam, effective_T) for lam in lambdas[null_rank:])


@dataclass(frozen=True)
class JohansenResult:
    eigenvalues: np.ndarray
    trace_stats: np.ndarray
    maxeig_stats: np.ndarray
    critical_values: dict
    eigenvectors: np.ndarray  # rows: levels (+ constant); columns sorted like eigenvalues
    s01: np.ndarray
    effective_T: int
    deterministic: str
    rank: int
    names: tuple[str, ...] = field(default=())

    @property
    def m(self) -> int:
        return self.eigenvalues.shape[0]

    def _normalized(self, r: int):
        if not 0 <= r <= self.m:
            raise ConfigError(f"rank {r} outside 0..{self.m}")
        v = self.eigenvectors[:, :r]
        a = self.s01 @ v
        if r == 0:
            return v, a
        lead = v[:r, :]
        if abs(np.linalg.det(lead)) < 1e-12 * max(1.0, np.abs(lead).max() ** r):
            raise NumericalError("leading block of beta is singular; reorder the series")
        inv = np.linalg.inv(lead)
        return v @ inv, a @ lead.T

    def beta(self, r: int | None = None) -> np.ndarray:
        """``m x r`` cointegrating matrix with identity leading block."""
        b, _ = self._normalized(self.rank if r is None else r)
        return b[: self.m]

    def beta_constant(self, r: int | None = None) -> np.ndarray | None:
        """Restricted long-run constant (one per relation), or None."""
        if self.deterministic != "intercept":
            return None
        b, _ = self._normalized(self.rank if r is None else r)
        return b[self.m]

    def alpha(self, r: int | None = None) -> np.ndarray:
        """``m x r`` loading matrix matching :meth:`beta`."""
        _, a = self._normalized(self.rank if r is None else r)
        return a

    @property
    def beta_hat(self) -> np.ndarray:
        return self.beta()

    @property
    def alpha_hat(self) -> np.ndarray:
        return self.alpha()

    def select_rank(self, level: float = 0.10, stat: str = "trace") -> int:
        """First null rank not rejected in the sequential test; ``m`` if all reject."""
        stats = self.trace_stats if stat == "trace" else self.maxeig_stats
        cvs = self.critical_values[stat][level]
        for r in range(self.m):
            if not stats[r] > cvs[r]:
                return r
        return self.m

    def to_dict(self) -> dict:
        tests = []
        for r in range(self.m):
            tests.append({
                "null_rank": r,
                "eigenvalue": float(self.eigenvalues[r]),
                "maxeig_stat": float(self.maxeig_stats[r]),
                "maxeig_cv": {f"{lv:.0%}": float(self.critical_values["maxeig"][lv][r]) for lv in LEVELS},
                "trace_stat": float(self.trace_stats[r]),
                "trace_cv": {f"{lv:.0%}": float(self.critical_values["trace"][lv][r]) for lv in LEVELS},
            })
        out = {
            "series": list(self.names),
            "deterministic": self.deterministic,
            "effective_T": self.effective_T,
            "eigenvalues": self.eigenvalues.tolist(),
            "tests": tests,
            "selected_rank_trace_10pct": self.select_rank(0.10, "trace"),
            "rank": self.rank,
        }
        if 0 < self.rank < self.m:
            out["beta"] = self.beta().tolist()
            out["alpha"] = self.alpha().tolist()
            const = self.beta_constant()
            out["beta_constant"] = None if const is None else const.tolist()
        return out


def _residualize(Y, Z):
    if Z.shape[1] == 0:
        return Y
    coef, *_ = np.linalg.lstsq(Z, Y, rcond=None)
    return Y - Z @ coef


def johansen_rrr(p: Panel, spec: VecmSpec = VecmSpec()) -> JohansenResult:
    """Reduced-rank regression of ``dX_t`` on ``X_{t-k}`` after concentrating out lagged differences.

    Eigenvalues are the squared canonical correlations between the two
    residual blocks, sorted in descending order. The eigenvectors are scaled
    so that ``V' S11 V = I``; :meth:`JohansenResult.beta` renormalises them to
    an identity leading block.
    """
    X = p.values
    T, m = X.shape
    spec.validate(T, m)
    if T - spec.lag_k - 1 < 10 * m:
        raise SizeError(f"T={T} too small for m={m}, lag_k={spec.lag_k}")
    d = ecm_design(X, spec.lag_k, list(p.names))
    n = d.T_eff
    z1 = d.levels
    if spec.deterministic == "intercept":
        z1 = np.column_stack([z1, np.ones(n)])
    r0 = _residualize(d.response, d.lagged_diffs)
    r1 = _residualize(z1, d.lagged_diffs)
    s00 = r0.T @ r0 / n
    s11 = r1.T @ r1 / n
    s01 = r0.T @ r1 / n
    try:
        s00_inv_s01 = scipy.linalg.solve(s00, s01, assume_a="pos")
        lam, vec = scipy.linalg.eigh(s01.T @ s00_inv_s01, s11)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalError(f"moment matrices are rank deficient: {exc}") from None
    order = np.argsort(lam)[::-1]
    lam = np.clip(lam[order][:m], 0.0, np.nextafter(1.0, 0.0))
    vec = vec[:, order]

    maxeig = np.array([maxeig_stat(l, n) for l in lam])
    trace = np.array([trace_stat(lam, r, n) for r in range(m)])
    cvs = {
        stat: {
            lv: np.array([johansen_critical_value(stat, m - r, spec.deterministic, lv) for r in range(m)])
            for lv in LEVELS
        }
        for stat in ("trace", "maxeig")
    }
    res = JohansenResult(
        eigenvalues=lam,
        trace_stats=trace,
        maxeig_stats=maxeig,
        critical_values=cvs,
        eigenvectors=vec,
        s01=s01,
        effective_T=n,
        deterministic=spec.deterministic,
        rank=0,
        names=p.names,
    )
    rank = spec.rank_r if spec.rank_r is not None else res.select_rank()
    object.__setattr__(res, "rank", int(rank))
    return res
