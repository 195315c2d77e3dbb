"""Fixed-interval smoother for the state-space form of a :class:`StackedSystem`.

State ``s_t = (b_t, c)``: identity transition, innovation covariance
``diag(I / lambda^2, 0)``, unit observation variance. Both the forward and
the backward pass run in information form, which makes the diffuse start
(zero prior information) exact; the smoothed state is the combination of the
forward filtered information at ``t`` and the backward predicted information
from ``t+1..T``. This is an independent route to the penalised least-squares
solution.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericalError
from .smoother import TvVecmFit
from .system import StackedSystem


def _predict(info: np.ndarray, vec: np.ndarray, Q: np.ndarray):
    # (info^{-1} + Q)^{-1} without inverting info, valid for singular info
    A = np.eye(info.shape[0]) + info @ Q
    new_info = np.linalg.solve(A, info)
    return 0.5 * (new_info + new_info.T), np.linalg.solve(A, vec)


def kalman_smoother_oracle(system: StackedSystem) -> TvVecmFit:
    Z, Y = system.regressors, system.response
    T, p = Z.shape
    ne = Y.shape[1]
    q = int(system.shared_intercept)
    s = p + q
    Q = np.zeros((s, s))
    Q[:p, :p] = np.eye(p) / system.smoothness_lambda**2
    H = np.column_stack([Z, np.ones(T)]) if q else Z

    f_info = np.empty((T, s, s))
    f_vec = np.empty((T, s, ne))
    info = np.zeros((s, s))
    vec = np.zeros((s, ne))
    for t in range(T):
        h = H[t]
        info = info + np.outer(h, h)
        vec = vec + np.outer(h, Y[t])
        f_info[t], f_vec[t] = info, vec
        info, vec = _predict(info, vec, Q)

    b = np.empty((T, s, ne))
    info = np.zeros((s, s))
    vec = np.zeros((s, ne))
    for t in range(T - 1, -1, -1):
        total = f_info[t] + info
        try:
            b[t] = np.linalg.solve(total, f_vec[t] + vec)
        except np.linalg.LinAlgError:
            raise NumericalError(f"smoothed information singular at period {t}") from None
        h = H[t]
        info, vec = _predict(info + np.outer(h, h), vec + np.outer(h, Y[t]), Q)

    path = np.transpose(b[:, :p, :], (0, 2, 1)).copy()
    intercept = b[:, p, :].mean(axis=0) if q else None
    return TvVecmFit(system=system, coef_path=path, intercept=intercept)
