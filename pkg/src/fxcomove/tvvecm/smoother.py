"""Penalised least-squares solution of a :class:`StackedSystem`.

The stacked matrix ``[Z; lambda D]`` is block bidiagonal in time, so it is
triangularised one period at a time with small dense Householder QR steps
(a square-root information sweep) followed by block back substitution.
Cost is ``O(T p^3)``. Working with the stacked matrix rather than the normal
equations keeps the solve accurate when ``lambda`` is very large.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import NumericalError
from .system import StackedSystem


@dataclass(frozen=True)
class TvVecmFit:
    system: StackedSystem
    coef_path: np.ndarray  # T x n_eq x p
    intercept: np.ndarray | None  # n_eq, shared intercept per equation

    @property
    def n_periods(self) -> int:
        return self.coef_path.shape[0]

    @property
    def alpha_path(self) -> np.ndarray:
        """``T x m x r`` loading matrices."""
        return self.coef_path[:, :, list(self.system.alpha_cols)]

    @property
    def gamma_path(self) -> np.ndarray:
        """``T x m x (m*k)`` lagged-difference blocks."""
        return self.coef_path[:, :, list(self.system.gamma_cols)]

    @property
    def fitted(self) -> np.ndarray:
        f = np.einsum("tp,tip->ti", self.system.regressors, self.coef_path)
        if self.intercept is not None:
            f = f + self.intercept
        return f

    @property
    def residuals(self) -> np.ndarray:
        return self.system.response - self.fitted

    @property
    def dates(self) -> tuple:
        return self.system.dates

    def stacked_solution(self, eq: int = 0) -> np.ndarray:
        """Coefficients of one equation in the layout of :meth:`StackedSystem.stacked_matrix`."""
        b = self.coef_path[:, eq, :].ravel()
        if self.intercept is not None:
            b = np.append(b, self.intercept[eq])
        return b

    def to_dict(self) -> dict:
        return {
            "dates": list(self.dates),
            "equations": list(self.system.names),
            "coefficients": list(self.system.coef_names),
            "coef_path": self.coef_path.tolist(),
            "intercept": None if self.intercept is None else self.intercept.tolist(),
        }


def _pivot_check(R: np.ndarray, scale: float, what: str):
    diag = np.abs(np.diag(R))
    if diag.size and diag.min() <= scale * 1e-13:
        raise NumericalError(f"singular penalised normal equations ({what})")


def solve_smoothing(system: StackedSystem) -> TvVecmFit:
    """Unique minimiser of ``||y - Z b||^2 + lambda^2 ||D b||^2`` for every equation at once."""
    Z, Y, lam = system.regressors, system.response, system.smoothness_lambda
    T, p = Z.shape
    ne = Y.shape[1]
    q = int(system.shared_intercept)
    scale = max(1.0, lam, float(np.abs(Z).max()) if Z.size else 1.0)

    r_tt = np.empty((T, p, p))
    r_tn = np.zeros((T, p, p))
    r_tc = np.empty((T, p, q))
    rhs = np.empty((T, p, ne))
    carry = np.zeros((0, p + q + ne))  # prior rows on [b_t, c | y]
    tail = None
    for t in range(T):
        nb = p if t < T - 1 else 0
        width = p + nb + q + ne
        blocks = []
        if carry.shape[0]:
            c = np.zeros((carry.shape[0], width))
            c[:, :p] = carry[:, :p]
            c[:, p + nb:] = carry[:, p:]
            blocks.append(c)
        obs = np.zeros((1, width))
        obs[0, :p] = Z[t]
        if q:
            obs[0, p + nb] = 1.0
        obs[0, p + nb + q:] = Y[t]
        blocks.append(obs)
        if nb:
            pen = np.zeros((p, width))
            pen[:, :p] = -lam * np.eye(p)
            pen[:, p:2 * p] = lam * np.eye(p)
            blocks.append(pen)
        M = np.vstack(blocks)
        if M.shape[0] < p:
            raise NumericalError(f"period {t}: too few rows to identify the coefficient block")
        R = np.linalg.qr(M, mode="r")
        _pivot_check(R[:p, :p], scale, f"period {t}")
        r_tt[t] = R[:p, :p]
        r_tn[t, :, :nb] = R[:p, p:p + nb]
        r_tc[t] = R[:p, p + nb:p + nb + q]
        rhs[t] = R[:p, p + nb + q:]
        rest = R[p:, p:]
        if nb:
            carry = rest[: nb + q]
        else:
            tail = rest

    if q:
        if tail is None or tail.shape[0] < q:
            raise NumericalError("intercept is not identified")
        _pivot_check(tail[:q, :q], scale, "intercept")
        cvec = scipy.linalg.solve_triangular(tail[:q, :q], tail[:q, q:])
    else:
        cvec = np.zeros((0, ne))

    b = np.empty((T, p, ne))
    nxt = np.zeros((p, ne))
    for t in range(T - 1, -1, -1):
        v = rhs[t] - r_tc[t] @ cvec - r_tn[t] @ nxt
        b[t] = scipy.linalg.solve_triangular(r_tt[t], v)
        nxt = b[t]
    return TvVecmFit(
        system=system,
        coef_path=np.transpose(b, (0, 2, 1)).copy(),
        intercept=cvec[0].copy() if q else None,
    )


def constant_path_fit(system: StackedSystem) -> np.ndarray:
    """Least squares with coefficients held fixed over time (the ``lambda -> inf`` limit).

    Returns a ``(p + q) x n_eq`` array; the shared intercept, if any, is last.
    """
    W = system.regressors
    if system.shared_intercept:
        W = np.column_stack([W, np.ones(system.n_periods)])
    coef, *_ = np.linalg.lstsq(W, system.response, rcond=None)
    return coef
