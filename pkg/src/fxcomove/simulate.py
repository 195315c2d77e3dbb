"""Seeded forward simulation of cointegrated VEC processes with known parameters.

Randomness comes from numpy's PCG64 bit generator seeded with a 64-bit
integer. Independent streams (Monte Carlo replications, bootstrap draws)
are derived with :class:`numpy.random.SeedSequence` spawning, so a stream's
draws depend only on the master seed and the stream's index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import ConfigError, SimulationError
from .panel import Panel

UNIT_ROOT_TOL = 1e-6
OVERFLOW_LIMIT = 1e12


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def spawn_seeds(seed: int, n: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(n)


@dataclass(frozen=True)
class AlphaSchedule:
    """Loading matrix as a function of the period index.

    ``constant`` holds one matrix. ``step`` holds ``n`` matrices and ``n-1``
    break fractions: period ``t`` uses matrix ``j`` once ``t >= floor(b_j * T)``.
    ``linear`` interpolates between two matrices over ``0..T-1``.
    """

    kind: Literal["constant", "step", "linear"]
    matrices: tuple
    breaks: tuple = ()

    def __post_init__(self):
        mats = tuple(np.atleast_2d(np.asarray(a, dtype=float)).reshape(np.shape(a)[0], -1) for a in self.matrices)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "breaks", tuple(float(b) for b in self.breaks))
        shapes = {a.shape for a in mats}
        if len(shapes) != 1:
            raise ConfigError("all loading matrices in a schedule must share one shape")
        if self.kind == "constant" and len(mats) != 1:
            raise ConfigError("constant schedule takes exactly one matrix")
        if self.kind == "linear" and len(mats) != 2:
            raise ConfigError("linear schedule takes a start and an end matrix")
        if self.kind == "step":
            if len(self.breaks) != len(mats) - 1:
                raise ConfigError("step schedule needs one break fraction fewer than matrices")
            if any(not 0 < b < 1 for b in self.breaks) or list(self.breaks) != sorted(self.breaks):
                raise ConfigError("break fractions must be increasing and inside (0, 1)")
        if self.kind not in ("constant", "step", "linear"):
            raise ConfigError(f"unknown schedule kind {self.kind!r}")

    @classmethod
    def constant(cls, alpha) -> "AlphaSchedule":
        return cls("constant", (alpha,))

    @classmethod
    def step(cls, before, after, at: float = 0.5) -> "AlphaSchedule":
        return cls("step", (before, after), (at,))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrices[0].shape

    def at(self, t: int, T: int) -> np.ndarray:
        if self.kind == "constant" or t < 0:
            return self.matrices[0]
        if self.kind == "step":
            j = sum(t >= int(np.floor(b * T)) for b in self.breaks)
            return self.matrices[j]
        w = t / max(T - 1, 1)
        return (1.0 - w) * self.matrices[0] + w * self.matrices[1]

    def checkpoints(self) -> list[np.ndarray]:
        """Matrices whose stability covers every period of the schedule."""
        if self.kind == "linear":
            return [(1 - w) * self.matrices[0] + w * self.matrices[1] for w in np.linspace(0, 1, 21)]
        return list(self.matrices)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "matrices": [a.tolist() for a in self.matrices], "breaks": list(self.breaks)}


def levels_companion(alpha, beta, gammas: Sequence[np.ndarray]) -> np.ndarray:
    """Companion matrix of the levels VAR implied by the error-correction form."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    m = beta.shape[0]
    k = len(gammas)
    pi = alpha @ beta.T if beta.shape[1] else np.zeros((m, m))
    # X_t = X_{t-1} + sum_i G_i (X_{t-i} - X_{t-i-1}) + Pi X_{t-k}
    coefs = [np.zeros((m, m)) for _ in range(k + 1)]
    coefs[0] += np.eye(m)
    for i, g in enumerate(gammas, start=1):
        coefs[i - 1] += g
        coefs[i] -= g
    coefs[k - 1] += pi
    p = k + 1
    comp = np.zeros((m * p, m * p))
    comp[:m] = np.hstack(coefs)
    comp[m:, :-m] = np.eye(m * (p - 1))
    return comp


def check_feasible(alpha, beta, gammas, r: int) -> None:
    """Require exactly ``m - r`` unit roots and every other root strictly inside the unit circle."""
    m = np.asarray(beta).shape[0]
    roots = np.abs(np.linalg.eigvals(levels_companion(alpha, beta, gammas)))
    unit = np.abs(roots - 1.0) < UNIT_ROOT_TOL
    n_unit = int(unit.sum())
    if n_unit != m - r:
        raise SimulationError(f"expected {m - r} unit roots, found {n_unit}")
    others = roots[~unit]
    if others.size and others.max() >= 1.0:
        raise SimulationError(f"explosive root of modulus {others.max():.6g}")


@dataclass(frozen=True)
class SimSpec:
    m: int
    r: int
    beta_true: np.ndarray
    alpha_path_true: AlphaSchedule
    gamma_true: tuple = ()
    intercept_true: np.ndarray | None = None
    noise_scale: np.ndarray | float = 1.0
    T: int = 300
    burn_in: int = 100
    seed: int = 0
    names: tuple = field(default=())

    def __post_init__(self):
        m, r = self.m, self.r
        if not 0 <= r < m:
            raise ConfigError(f"rank r={r} must satisfy 0 <= r < m={m}")
        beta = np.asarray(self.beta_true, dtype=float).reshape(m, r)
        alpha = self.alpha_path_true
        if not isinstance(alpha, AlphaSchedule):
            alpha = AlphaSchedule.constant(np.asarray(alpha, dtype=float).reshape(m, r))
        if alpha.shape != (m, r):
            raise ConfigError(f"loading matrices must be {m} x {r}, got {alpha.shape}")
        gammas = tuple(np.asarray(g, dtype=float).reshape(m, m) for g in self.gamma_true)
        if not gammas:
            gammas = (np.zeros((m, m)),)
        mu = np.zeros(m) if self.intercept_true is None else np.asarray(self.intercept_true, dtype=float).reshape(m)
        scale = np.broadcast_to(np.asarray(self.noise_scale, dtype=float), (m,)).copy()
        if np.any(scale <= 0):
            raise ConfigError("noise_scale must be positive")
        if self.T < 2 or self.burn_in < 0:
            raise ConfigError("need T >= 2 and burn_in >= 0")
        names = tuple(self.names) or tuple(f"x{j + 1}" for j in range(m))
        for a in alpha.checkpoints():
            check_feasible(a, beta, gammas, r)
        object.__setattr__(self, "beta_true", beta)
        object.__setattr__(self, "alpha_path_true", alpha)
        object.__setattr__(self, "gamma_true", gammas)
        object.__setattr__(self, "intercept_true", mu)
        object.__setattr__(self, "noise_scale", scale)
        object.__setattr__(self, "names", names)

    @property
    def lag_k(self) -> int:
        return len(self.gamma_true)

    def replace(self, **changes) -> "SimSpec":
        fields = {f: getattr(self, f) for f in self.__dataclass_fields__}
        fields.update(changes)
        return SimSpec(**fields)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "r": self.r,
            "beta_true": self.beta_true.tolist(),
            "alpha_path_true": self.alpha_path_true.to_dict(),
            "gamma_true": [g.tolist() for g in self.gamma_true],
            "intercept_true": self.intercept_true.tolist(),
            "noise_scale": self.noise_scale.tolist(),
            "T": self.T,
            "burn_in": self.burn_in,
            "seed": self.seed,
            "names": list(self.names),
        }


def simulate_vecm(spec: SimSpec) -> Panel:
    """Iterate the error-correction recursion with Gaussian shocks and return the levels panel."""
    m, k = spec.m, spec.lag_k
    T, burn = spec.T, spec.burn_in
    N = T + burn + k + 1
    rng = make_rng(spec.seed)
    eps = rng.standard_normal((N, m)) * spec.noise_scale
    X = np.zeros((N, m))
    dX = np.zeros((N, m))
    beta = spec.beta_true
    for t in range(k + 1, N):
        step = spec.intercept_true + eps[t]
        for i, g in enumerate(spec.gamma_true, start=1):
            step = step + g @ dX[t - i]
        if spec.r:
            a = spec.alpha_path_true.at(t - (N - T), T)
            step = step + a @ (beta.T @ X[t - k])
        dX[t] = step
        X[t] = X[t - 1] + step
        if not np.all(np.abs(X[t]) < OVERFLOW_LIMIT):
            raise SimulationError(f"simulated levels exceed {OVERFLOW_LIMIT:g} at step {t}")
    return Panel(spec.names, tuple(range(T)), X[N - T:], ("simulate",))


def true_zeta_path(spec: SimSpec) -> np.ndarray:
    """Largest singular value of the true loading matrix for each of the ``T`` periods."""
    if spec.r == 0:
        return np.zeros(spec.T)
    return np.array([np.linalg.norm(spec.alpha_path_true.at(t, spec.T), 2) for t in range(spec.T)])


def default_spec(seed: int = 0, T: int = 300, noise_scale: float = 0.02) -> SimSpec:
    """Trivariate, one cointegrating relation, one lagged difference."""
    return SimSpec(
        m=3,
        r=1,
        beta_true=np.array([[1.0], [-0.5], [-0.5]]),
        alpha_path_true=AlphaSchedule.constant([[-0.15], [0.05], [0.05]]),
        gamma_true=(0.1 * np.eye(3),),
        noise_scale=noise_scale,
        T=T,
        seed=seed,
    )
