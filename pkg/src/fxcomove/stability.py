"""Scans for a change in cointegration rank over unknown break dates.

The subsample kernel is a nonparametric variance-ratio statistic. On a window
of ``n`` periods let ``x`` be the (window-demeaned) levels and ``Y`` their
partial sums, ``A = sum x x'`` and ``B = sum Y Y'``. Stochastic trends give
eigenvalues of ``B^{-1} A`` of order ``n^{-2}`` and stationary directions of
order ``n^{-1}``. With ``r`` cointegrating relations under the null, the
``(r+1)``-th largest eigenvalue scaled by ``n^2`` stays bounded, while it
diverges in a window where an extra relation appears. No nuisance parameters
are estimated, so the kernel is invariant to any nonsingular linear
transformation of the series.

``sup_q1`` takes the supremum over windows cut off by one break (the part
before or after it), ``sup_q2`` over the middle piece of two breaks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ConfigError, NumericalError, SizeError
from .panel import Panel

CRITICAL_VALUES_1PCT = {"sup_q1": 11.24, "sup_q2": 16.41, "wq": 11.42, "sq": 22.03}
STATISTICS = ("sup_q1", "sup_q2", "wq", "sq")


@dataclass(frozen=True)
class QuConfig:
    trimming: float = 0.15
    max_breaks: int = 2
    null_rank: int = 1
    lag_k: int = 1
    deterministic: Literal["constant", "none"] = "constant"
    grid_step: int = 1
    critical_values_1pct: dict = field(default_factory=lambda: dict(CRITICAL_VALUES_1PCT))

    def __post_init__(self):
        if not 0 < self.trimming < 0.5:
            raise ConfigError("trimming must lie in (0, 0.5)")
        if self.max_breaks not in (1, 2):
            raise ConfigError("max_breaks must be 1 or 2")
        if self.null_rank < 0 or self.lag_k < 0:
            raise ConfigError("null_rank and lag_k must be non-negative")
        if self.deterministic not in ("constant", "none"):
            raise ConfigError(f"unknown deterministic {self.deterministic!r}")
        if self.grid_step < 1:
            raise ConfigError("grid_step must be >= 1")
        cv = dict(CRITICAL_VALUES_1PCT)
        cv.update({k: float(v) for k, v in self.critical_values_1pct.items()})
        unknown = set(cv) - set(STATISTICS)
        if unknown:
            raise ConfigError(f"unknown critical value keys {sorted(unknown)}")
        object.__setattr__(self, "critical_values_1pct", cv)

    def min_length(self, T: int) -> int:
        return max(2, math.ceil(self.trimming * T))

    def validate(self, T: int, m: int) -> None:
        if self.null_rank >= m:
            raise ConfigError(f"null_rank {self.null_rank} must be below the number of series {m}")
        need = 4 * m + self.lag_k * m
        if self.trimming * T < need:
            raise ConfigError(
                f"trimming {self.trimming} leaves {self.trimming * T:.1f} periods per piece; need at least {need}"
            )


@dataclass(frozen=True)
class QuResult:
    sup_q1: float
    sup_q2: float | None
    wq: float | None
    sq: float | None
    wq_scaled: float | None
    sq_scaled: float | None
    breaks: dict
    critical_values_1pct: dict
    null_rank: int
    trimming: float

    @property
    def reject_1pct(self) -> dict:
        out = {}
        for k in STATISTICS:
            v = getattr(self, k)
            if v is not None:
                out[k] = bool(v > self.critical_values_1pct[k])
        return out

    def to_dict(self) -> dict:
        return {
            "sup_q1": self.sup_q1,
            "sup_q2": self.sup_q2,
            "wq": self.wq,
            "sq": self.sq,
            "wq_scaled": self.wq_scaled,
            "sq_scaled": self.sq_scaled,
            "cv_1pct": dict(self.critical_values_1pct),
            "reject_1pct": self.reject_1pct,
            "breaks": {k: list(v) for k, v in self.breaks.items()},
            "null_rank": self.null_rank,
            "trimming": self.trimming,
        }


class _Moments:
    """Prefix sums that give ``A`` and ``B`` for any window in ``O(m^2)``."""

    def __init__(self, X: np.ndarray, demean: bool):
        X = np.asarray(X, dtype=float)
        if demean:
            X = X - X.mean(axis=0)  # conditioning only; the kernel demeans per window
        T, m = X.shape
        self.demean = demean
        self.P = np.vstack([np.zeros(m), np.cumsum(X, axis=0)])  # P[s] = sum_{t<s} x_t
        s = np.arange(T + 1, dtype=float)
        Q = self.P
        self.cx = self.P  # sum x over [0, s) is P[s]
        self.cxx = np.concatenate([np.zeros((1, m, m)), np.cumsum(X[:, :, None] * X[:, None, :], axis=0)])
        # sums over s' in [1, s] of Q, QQ', s'Q, s', s'^2
        self.cq = np.concatenate([np.zeros((1, m)), np.cumsum(Q[1:], axis=0)])
        self.cqq = np.concatenate([np.zeros((1, m, m)), np.cumsum(Q[1:, :, None] * Q[1:, None, :], axis=0)])
        self.csq = np.concatenate([np.zeros((1, m)), np.cumsum(s[1:, None] * Q[1:], axis=0)])
        self.cs = np.concatenate([[0.0], np.cumsum(s[1:])])
        self.cs2 = np.concatenate([[0.0], np.cumsum(s[1:] ** 2)])

    def matrices(self, a: np.ndarray, b: np.ndarray):
        """``A`` and ``B`` (batched) for windows ``[a, b)``."""
        a = np.asarray(a)
        b = np.asarray(b)
        n = (b - a).astype(float)
        S1 = self.cx[b] - self.cx[a]
        S2 = self.cxx[b] - self.cxx[a]
        xbar = S1 / n[:, None] if self.demean else np.zeros_like(S1)
        A = S2 - n[:, None, None] * xbar[:, :, None] * xbar[:, None, :]
        # partial sums u_s = Q_s - c - s*xbar for s in (a, b], c = Q_a - a*xbar
        c = self.P[a] - a[:, None] * xbar
        G = self.cqq[b] - self.cqq[a]
        g = self.cq[b] - self.cq[a]
        h = self.csq[b] - self.csq[a]
        s1 = self.cs[b] - self.cs[a]
        s2 = self.cs2[b] - self.cs2[a]

        def sym(u, v):
            outer = u[:, :, None] * v[:, None, :]
            return outer + np.swapaxes(outer, 1, 2)

        B = (
            G
            - sym(g, c)
            + n[:, None, None] * c[:, :, None] * c[:, None, :]
            - sym(h, xbar)
            + s1[:, None, None] * sym(c, xbar)
            + s2[:, None, None] * xbar[:, :, None] * xbar[:, None, :]
        )
        return 0.5 * (A + np.swapaxes(A, 1, 2)), 0.5 * (B + np.swapaxes(B, 1, 2))


def _kernel(mom: _Moments, a: np.ndarray, b: np.ndarray, null_rank: int) -> np.ndarray:
    A, B = mom.matrices(a, b)
    try:
        L = np.linalg.cholesky(B)
    except np.linalg.LinAlgError:
        raise NumericalError("partial-sum moment matrix not positive definite in some window") from None
    Li_A = np.linalg.solve(L, A)
    M = np.linalg.solve(L, np.swapaxes(Li_A, 1, 2))
    lam = np.linalg.eigvalsh(0.5 * (M + np.swapaxes(M, 1, 2)))[:, ::-1]
    n = (np.asarray(b) - np.asarray(a)).astype(float)
    return np.maximum(n**2 * lam[:, null_rank], 0.0)


def window_kernel(X: np.ndarray, start: int, stop: int, null_rank: int = 0, deterministic: str = "constant") -> float:
    """The kernel on ``X[start:stop]`` computed directly from the window (no prefix sums)."""
    x = np.asarray(X, dtype=float)[start:stop]
    if deterministic == "constant":
        x = x - x.mean(axis=0)
    Y = np.cumsum(x, axis=0)
    A = x.T @ x
    B = Y.T @ Y
    lam = np.sort(np.real(np.linalg.eigvals(np.linalg.solve(B, A))))[::-1]
    return float(max(x.shape[0] ** 2 * lam[null_rank], 0.0))


def subsample_rank_stat(p: Panel, window: tuple[int, int], config: QuConfig) -> float:
    start, stop = (int(w) for w in window)
    if not 0 <= start < stop <= p.T:
        raise SizeError(f"window [{start}, {stop}) outside 0..{p.T}")
    if stop - start < config.min_length(p.T):
        raise SizeError(f"window of {stop - start} periods is shorter than the trimmed minimum {config.min_length(p.T)}")
    if config.null_rank >= p.m:
        raise ConfigError(f"null_rank {config.null_rank} must be below the number of series {p.m}")
    mom = _Moments(p.values, config.deterministic == "constant")
    return float(_kernel(mom, np.array([start]), np.array([stop]), config.null_rank)[0])


def _candidates(T: int, h: int, step: int) -> np.ndarray:
    tau = np.arange(h, T - h + 1)
    return tau[tau % step == 0]


def _scan(mom, a, b, null_rank, threads) -> np.ndarray:
    if a.size == 0:
        return np.empty(0)
    if threads <= 1 or a.size < 2048:
        return _kernel(mom, a, b, null_rank)
    chunks = np.array_split(np.arange(a.size), threads * 4)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda idx: _kernel(mom, a[idx], b[idx], null_rank), chunks))
    return np.concatenate(parts)


def qu_scan(p: Panel, config: QuConfig, threads: int = 1) -> QuResult:
    T, m = p.T, p.m
    config.validate(T, m)
    h = config.min_length(T)
    mom = _Moments(p.values, config.deterministic == "constant")
    tau = _candidates(T, h, config.grid_step)
    if tau.size == 0:
        raise ConfigError("no admissible break dates on the grid")

    # one break at tau: the piece before it [0, tau) and the piece after it [tau, T)
    a1 = np.concatenate([np.zeros(tau.size, dtype=int), tau])
    b1 = np.concatenate([tau, np.full(tau.size, T)])
    q1 = _scan(mom, a1, b1, config.null_rank, threads)
    order1 = np.lexsort((b1 - a1, np.where(a1 == 0, b1, a1)))  # earliest break, then shorter piece
    i1 = order1[np.argmax(q1[order1])]
    sup_q1 = float(q1[i1])
    brk1 = int(b1[i1]) if a1[i1] == 0 else int(a1[i1])
    breaks = {"sup_q1": (p.dates[brk1],)}

    sup_q2 = wq = sq = wq_s = sq_s = None
    if config.max_breaks == 2:
        t1, t2 = np.meshgrid(tau, tau, indexing="ij")
        keep = (t2 - t1 >= h)
        a2, b2 = t1[keep].astype(int), t2[keep].astype(int)
        if a2.size == 0:
            raise ConfigError("trimming leaves no admissible two-break partition")
        q2 = _scan(mom, a2, b2, config.null_rank, threads)
        i2 = int(np.argmax(q2))  # lexicographic (tau1, tau2) order, so earliest wins ties
        sup_q2 = float(q2[i2])
        breaks["sup_q2"] = (p.dates[int(a2[i2])], p.dates[int(b2[i2])])
        wq = max(sup_q1, sup_q2)
        sq = sup_q1 + sup_q2
        breaks["wq"] = breaks["sup_q1"] if sup_q1 >= sup_q2 else breaks["sup_q2"]
        breaks["sq"] = breaks["sup_q1"] + breaks["sup_q2"]
        cv = config.critical_values_1pct
        scaled = cv["sup_q1"] / cv["sup_q2"] * sup_q2
        wq_s = max(sup_q1, scaled)
        sq_s = sup_q1 + scaled
    return QuResult(
        sup_q1=sup_q1,
        sup_q2=sup_q2,
        wq=wq,
        sq=sq,
        wq_scaled=wq_s,
        sq_scaled=sq_s,
        breaks=breaks,
        critical_values_1pct=dict(config.critical_values_1pct),
        null_rank=config.null_rank,
        trimming=config.trimming,
    )
