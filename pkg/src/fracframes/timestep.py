"""Implicit Runge-Kutta time stepping for d_t u + (-Delta)^s u = 0 through
Kronecker-structured least-squares stage solves.

Each step solves the coupled stage system
    (I_m (x) X + dt * (A (x) X_*)) k = -(y ... y),   y = X_* u,
then updates u <- u + dt * sum_i b_i k_i.  The stage right-hand side
carries the minus sign of k_i = -F(...); with the backward Euler tableau
this reduces exactly to (X + dt X_*) u_next = X u.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .frame import LsSystem, SumSpace, tsvd_solve

__all__ = [
    "ButcherTableau",
    "tableau",
    "TABLEAU_NAMES",
    "TimeState",
    "StepDiagnostics",
    "Trajectory",
    "StageFactorization",
    "stage_factorization",
    "rk_step",
    "integrate",
    "integrate_variable_s",
]

ORDER_TOL = 1e-12
TABLEAU_NAMES = ("backward-euler", "implicit-midpoint", "gauss-legendre-4",
                 "gauss-legendre-6")


@dataclass(frozen=True)
class ButcherTableau:
    """Implicit RK coefficients (A, b, c) with a stated classical order.

    Construction verifies consistency and the order conditions: sum b = 1;
    b.c = 1/2 for order >= 2; b.c^2 = 1/3 and b A c = 1/6 for order >= 3;
    and the quadrature conditions sum b c^(k-1) = 1/k for k <= order.
    """

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    order: int

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float)
        c = np.asarray(self.c, dtype=float)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        m = b.size
        if A.shape != (m, m) or c.shape != (m,):
            raise ValueError("inconsistent tableau shapes")
        checks = [(float(np.sum(b)), 1.0, "sum b = 1")]
        if self.order >= 2:
            checks.append((float(b @ c), 0.5, "b.c = 1/2"))
        if self.order >= 3:
            checks.append((float(b @ c ** 2), 1.0 / 3.0, "b.c^2 = 1/3"))
            checks.append((float(b @ A @ c), 1.0 / 6.0, "b A c = 1/6"))
        for k in range(1, self.order + 1):
            checks.append((float(b @ c ** (k - 1)), 1.0 / k, f"quadrature k={k}"))
        for got, want, label in checks:
            if abs(got - want) > ORDER_TOL:
                raise ValueError(f"order condition {label} violated: {got} != {want}")

    @property
    def stages(self) -> int:
        return self.b.size


def tableau(name: str) -> ButcherTableau:
    """Shipped A-stable tableaus: backward Euler, implicit midpoint, and the
    2- and 3-stage Gauss-Legendre methods (orders 4 and 6)."""
    if name == "backward-euler":
        return ButcherTableau([[1.0]], [1.0], [1.0], 1)
    if name == "implicit-midpoint":
        return ButcherTableau([[0.5]], [1.0], [0.5], 2)
    if name == "gauss-legendre-4":
        r = math.sqrt(3.0) / 6.0
        return ButcherTableau([[0.25, 0.25 - r], [0.25 + r, 0.25]],
                              [0.5, 0.5], [0.5 - r, 0.5 + r], 4)
    if name == "gauss-legendre-6":
        r = math.sqrt(15.0)
        A = [[5.0 / 36.0, 2.0 / 9.0 - r / 15.0, 5.0 / 36.0 - r / 30.0],
             [5.0 / 36.0 + r / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r / 24.0],
             [5.0 / 36.0 + r / 30.0, 2.0 / 9.0 + r / 15.0, 5.0 / 36.0]]
        return ButcherTableau(A, [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
                              [0.5 - r / 10.0, 0.5, 0.5 + r / 10.0], 6)
    raise ValueError(f"unknown tableau {name!r}; known: {TABLEAU_NAMES}")


@dataclass(frozen=True)
class TimeState:
    t: float
    coeffs: np.ndarray
    space: SumSpace

    def __post_init__(self):
        if self.coeffs.shape != (self.space.n_cols,):
            raise ValueError("coefficient length must match the space")


@dataclass(frozen=True)
class StepDiagnostics:
    """Per-step watchdog data; coeff_inf flags the coefficient-growth
    failure mode of long time integrations."""

    t: float
    coeff_inf: float
    kept_rank: int


@dataclass
class Trajectory:
    states: list[TimeState]
    diagnostics: list[StepDiagnostics] = field(default_factory=list)

    @property
    def final(self) -> TimeState:
        return self.states[-1]


@dataclass
class StageFactorization:
    """SVD of the stacked stage matrix, reusable across constant-s steps."""

    system: LsSystem
    stages: int

    def apply_pinv(self, rhs: np.ndarray, eps: float | None):
        """Truncated-pseudoinverse application without the residual matvec."""
        u, sig, vt = self.system.svd
        eps_used = DEFAULT_EPS_FACTOR * sig[0] if eps is None else float(eps)
        keep = sig >= eps_used
        if not np.any(keep):
            warnings.warn("all singular values below eps in the stage solve",
                          stacklevel=2)
            return np.zeros(self.system.matrix.shape[1]), 0
        coef = vt[keep].T @ ((u[:, keep].T @ rhs) / sig[keep])
        return coef, int(np.count_nonzero(keep))


def stage_factorization(tab: ButcherTableau, dt: float, X: np.ndarray,
                        X_star: np.ndarray) -> StageFactorization:
    m = tab.stages
    X_A = np.kron(np.eye(m), X) + dt * np.kron(tab.A, X_star)
    system = LsSystem(X_A, None, None)
    return StageFactorization(system, m)


def rk_step(state: TimeState, tab: ButcherTableau, dt: float, X: np.ndarray,
            X_star: np.ndarray, eps: float | None = None,
            factorization: StageFactorization | None = None) -> tuple[TimeState, StepDiagnostics]:
    """One implicit RK step of the fractional heat equation.

    X is the solution-space matrix at the grid, X_star the matrix of
    (-Delta)^s applied to the space (no identity part).
    """
    if X.shape != X_star.shape or X.shape[1] != state.coeffs.size:
        raise ValueError("matrix shapes inconsistent with the state")
    fac = factorization or stage_factorization(tab, dt, X, X_star)
    m = tab.stages
    y = X_star @ state.coeffs
    rhs = -np.tile(y, m)
    k_flat, rank = fac.apply_pinv(rhs, eps)
    stages = k_flat.reshape(m, -1)
    new_coeffs = state.coeffs + dt * (tab.b @ stages)
    new_state = TimeState(state.t + dt, new_coeffs, state.space)
    diag = StepDiagnostics(new_state.t, float(np.max(np.abs(new_coeffs))), rank)
    return new_state, diag


def _step_count(t0: float, t_end: float, dt: float) -> int:
    if t_end < t0:
        raise ValueError("t_end must not precede the initial time")
    if t_end == t0:
        return 0
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    steps = (t_end - t0) / dt
    n = round(steps)
    if abs(steps - n) > 1e-12 * max(1.0, abs(steps)):
        raise ValueError(f"dt={dt} does not divide the horizon [{t0}, {t_end}]")
    return int(n)


def integrate(init: TimeState, tab: ButcherTableau, dt: float, t_end: float,
              system_builder, eps: float | None = None,
              observer=None) -> Trajectory:
    """Repeated rk_step with the stage factorization computed once.

    system_builder() must return the pair (X, X_star) for the state's
    space; observer(state), when given, runs after every step.
    """
    n_steps = _step_count(init.t, t_end, dt)
    traj = Trajectory([init])
    if n_steps == 0:
        return traj
    X, X_star = system_builder()
    fac = stage_factorization(tab, dt, X, X_star)
    state = init
    for _ in range(n_steps):
        state, diag = rk_step(state, tab, dt, X, X_star, eps, fac)
        traj.states.append(state)
        traj.diagnostics.append(diag)
        if observer is not None:
            observer(state)
    return traj


def integrate_variable_s(init: TimeState, tab: ButcherTableau, dt: float,
                         t_end: float, s_of_t, rebuild,
                         eps: float | None = None, observer=None) -> Trajectory:
    """Time stepping with the approximation space rebuilt at s(t_n) per step.

    rebuild(s) must return (space, X, X_star) on the fixed grid.  Between
    steps the previous coefficients are transferred by re-expanding the
    solution's grid values in the new space with the same truncated SVD;
    the exponent is frozen at s(t_n) for all internal stages.
    """
    n_steps = _step_count(init.t, t_end, dt)
    traj = Trajectory([init])
    cache: dict[float, tuple] = {}
    fit_cache: dict[float, LsSystem] = {}
    state = init
    prev_X = None
    prev_s = None
    for _ in range(n_steps):
        s_now = float(s_of_t(state.t))
        if s_now not in cache:
            space, X, X_star = rebuild(s_now)
            cache[s_now] = (space, X, X_star, stage_factorization(tab, dt, X, X_star))
        space, X, X_star, fac = cache[s_now]
        if prev_X is None:
            if state.space != space:
                raise ValueError("initial state must live in the space rebuild(s(t0))")
        elif s_now != prev_s:
            vals = prev_X @ state.coeffs
            if s_now not in fit_cache:
                fit_cache[s_now] = LsSystem(X, None, space)
            coeffs, _ = tsvd_solve(fit_cache[s_now], vals, eps)
            state = TimeState(state.t, coeffs, space)
        state, diag = rk_step(state, tab, dt, X, X_star, eps, fac)
        traj.states.append(state)
        traj.diagnostics.append(diag)
        if observer is not None:
            observer(state)
        prev_X, prev_s = X, s_now
    return traj
