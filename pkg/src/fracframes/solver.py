"""Stationary fractional-PDE solving on the sum spaces, with closed-form
right-hand sides for the Gaussian benchmarks."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frame import (LsSystem, OperatorSpec, PolarGrid, SumSpace, assemble,
                    basis_matrix, operator_image, tsvd_solve, SolveInfo)
from .specfun import gamma_fn, hyp1f1

__all__ = [
    "Solution",
    "solve_stationary",
    "evaluate",
    "gaussian_frac_term",
    "rhs_gaussian_1d",
    "rhs_gaussian_2d",
]


@dataclass(frozen=True)
class Solution:
    space: SumSpace
    coeffs: np.ndarray
    info: SolveInfo

    def __post_init__(self):
        if self.coeffs.shape != (self.space.n_cols,):
            raise ValueError("coefficient length must match the space column count")


def _sample(f, grid, dim: int) -> np.ndarray:
    if callable(f):
        if dim == 1:
            return np.asarray(f(np.asarray(grid, dtype=float)), dtype=float)
        pts = grid.points if isinstance(grid, PolarGrid) else np.column_stack(grid)
        return np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
    return np.asarray(f, dtype=float)


def solve_stationary(op: OperatorSpec, f, space: SumSpace, grid,
                     eps: float | None = None,
                     system: LsSystem | None = None) -> Solution:
    """Expand f in L S; the coefficients against S itself are the solution.

    f may be a callable (sampled on the grid) or precomputed samples.
    A pre-assembled image system may be passed to reuse its SVD.
    """
    if system is None:
        system = assemble(operator_image(space, op), grid)
    y = _sample(f, grid, space.dim)
    coeffs, info = tsvd_solve(system, y, eps)
    return Solution(space, coeffs, info)


def evaluate(sol: Solution, x, y=None):
    """S(x) . coeffs at arbitrary points off the family singular sets."""
    if sol.space.dim == 1:
        pts = np.asarray(x, dtype=float)
        mat = basis_matrix(sol.space, np.atleast_1d(pts))
    else:
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        ya = np.atleast_1d(np.asarray(y, dtype=float))
        mat = basis_matrix(sol.space, (xa, ya))
        pts = np.asarray(x, dtype=float)
    vals = mat @ sol.coeffs
    return float(vals[0]) if pts.ndim == 0 else vals


def gaussian_frac_term(s: float, x):
    """(-Delta)^s of exp(-x^2): 4^s Gamma(s+1/2)/Gamma(1/2) 1F1(s+1/2;1/2;-x^2)."""
    if not 0.0 < s < 1.0:
        raise ValueError(f"exponent must lie in (0,1), got {s}")
    xa = np.asarray(x, dtype=float)
    return (4.0 ** s * gamma_fn(s + 0.5) / math.sqrt(math.pi)
            * hyp1f1(s + 0.5, 0.5, -(xa * xa)))


def rhs_gaussian_1d(s: float, x):
    """Exact right-hand side of (I + (-Delta)^s) u = f for u = exp(-x^2)."""
    xa = np.asarray(x, dtype=float)
    return np.exp(-(xa * xa)) + gaussian_frac_term(s, xa)


def rhs_gaussian_2d(x, y):
    """Exact right-hand side of (-Delta)^(1/2) u = f for u = exp(-x^2-y^2)."""
    r2 = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
    return 2.0 * gamma_fn(1.5) * hyp1f1(1.5, 1.0, -r2)
