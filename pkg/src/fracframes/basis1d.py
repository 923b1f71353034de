"""Jacobi polynomials, weighted Jacobi polynomials, and their fractional
Laplacian images (extended Jacobi functions) on all of R, plus affine maps.

The extended functions have an inside branch on (-1, 1) and an outside
branch with algebraic tails; both are hypergeometric.  For matched weight
and exponent (a = s) the inside branch collapses to a scaled Jacobi
polynomial, which is the fast path used by the batch evaluator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import PoleError, gamma_product, hyp2f1, sinpi

__all__ = [
    "SingularPointError",
    "Interval",
    "JacobiParams",
    "ExtendedParams",
    "jacobi_p",
    "jacobi_rows",
    "weighted_q",
    "weighted_rows",
    "extended_p",
    "extended_p_batch",
    "inside_scale",
    "affine_eval",
]

SINGULAR_TOL = 1e-12


class SingularPointError(ValueError):
    """Evaluation requested within tolerance of a branch point |x| = 1."""


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"degenerate interval [{self.a}, {self.b}]")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.b - self.a)

    def map_in(self, x):
        """Affine pullback onto the reference interval [-1, 1]."""
        return (np.asarray(x, dtype=float) - self.midpoint) / self.half_width


@dataclass(frozen=True)
class JacobiParams:
    a: float
    b: float

    def __post_init__(self):
        if self.a <= -1.0 or self.b <= -1.0:
            raise ValueError(f"Jacobi weights need a, b > -1, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class ExtendedParams:
    """Weight exponent a and fractional exponent s of an extended function.

    s = -1/2 is admitted as a boundary carve-out but only degrees n >= 1
    may be evaluated there (the n = 0 prefactors hit a Gamma pole).
    """

    a: float
    s: float

    def __post_init__(self):
        if self.a <= -1.0:
            raise ValueError(f"weight exponent must exceed -1, got {self.a}")
        s = self.s
        ok = (-0.5 < s < 0.0) or (0.0 < s < 1.0) or s == -0.5
        if not ok:
            raise ValueError(f"fractional exponent {s} outside (-1/2, 0) u (0, 1)")


def _half(n: int) -> int:
    return n // 2


def jacobi_p(n: int, params: JacobiParams, x):
    """P_n^(a,b)(x) by forward three-term recurrence, any real x."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    row = jacobi_rows(n, params, x)[n]
    return float(row[0]) if np.ndim(x) == 0 else row


def jacobi_rows(n_max: int, params: JacobiParams, x) -> np.ndarray:
    """All degrees 0..n_max at the given points, shape (n_max+1, len(x))."""
    a, b = params.a, params.b
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rows = np.empty((n_max + 1, x.size))
    rows[0] = 1.0
    if n_max >= 1:
        rows[1] = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for n in range(2, n_max + 1):
        c0 = 2.0 * n + a + b
        denom = 2.0 * n * (n + a + b) * (c0 - 2.0)
        rows[n] = ((c0 - 1.0) * ((c0 * (c0 - 2.0)) * x + a * a - b * b) * rows[n - 1]
                   - 2.0 * (n + a - 1.0) * (n + b - 1.0) * c0 * rows[n - 2]) / denom
    return rows


def _plus_weight(a: float, b: float, x: np.ndarray) -> np.ndarray:
    inside = np.abs(x) < 1.0
    out = np.zeros_like(x)
    xi = x[inside]
    out[inside] = (1.0 - xi) ** a * (1.0 + xi) ** b
    return out


def weighted_q(n: int, params: JacobiParams, x):
    """Q_n^(a,b)(x) = (1-x)_+^a (1+x)_+^b P_n^(a,b)(x); zero for |x| >= 1."""
    xarr = np.atleast_1d(np.asarray(x, dtype=float))
    out = _plus_weight(params.a, params.b, xarr) * jacobi_p(n, params, xarr)
    return float(out[0]) if np.ndim(x) == 0 else out


def weighted_rows(n_max: int, params: JacobiParams, x) -> np.ndarray:
    xarr = np.atleast_1d(np.asarray(x, dtype=float))
    return _plus_weight(params.a, params.b, xarr)[None, :] * jacobi_rows(n_max, params, xarr)


def inside_scale(s: float, n: int) -> float:
    """Constant linking the matched-weight extended function to P_n^(s,s)
    on (-1, 1): 4^s G(s+h+1) G(n+s-h+1/2) / (h! G(n-h+1/2)), h = floor(n/2)."""
    h = _half(n)
    return 4.0 ** s * gamma_product(
        (s + h + 1.0, n + s - h + 0.5), (h + 1.0, n - h + 0.5))


def _check_singular(x: np.ndarray):
    if np.any(np.abs(np.abs(x) - 1.0) < SINGULAR_TOL):
        raise SingularPointError("extended function evaluated within 1e-12 of |x| = 1")


def _require_degree(params: ExtendedParams, n: int):
    if n < 0:
        raise ValueError("degree must be >= 0")
    if params.s == -0.5 and n == 0:
        raise PoleError("s = -1/2 admits degrees n >= 1 only")


def _general_inside(n: int, a: float, s: float, x: np.ndarray) -> np.ndarray:
    h = _half(n)
    par = n - 2 * h
    # pi / (sin(pi(2h-n-s+1/2)) Gamma(h-n-s+1/2)) reduces, by reflection with
    # the integer offset h, to (-1)^h Gamma(n+s-h+1/2); this form stays finite
    # for half-integer s where sine and Gamma pole cancel.
    pref = (4.0 ** s * (-1.0) ** h
            * gamma_product((a + n + 1.0, n + s - h + 0.5),
                            (n + 1.0, par + 0.5, a - s + h + 1.0)))
    f = hyp2f1(-a + s - h, n + s - h + 0.5, par + 0.5, x * x)
    val = pref * f
    return val * x if par else val


def _general_outside(n: int, a: float, s: float, x: np.ndarray) -> np.ndarray:
    h = _half(n)
    hm = (n - 1) // 2
    par = n - 2 * h
    pref = (-(4.0 ** s) * 2.0 ** (-n - 2.0 * s) * sinpi(s) / math.sqrt(math.pi)
            * gamma_product((a + n + 1.0, n + 2.0 * s + 1.0), (n + 1.0, n + 1.5 + a)))
    ax = np.abs(x)
    tail = ax ** (-2.0 * hm - 2.0 * s - 3.0)
    f = hyp2f1(s + h + 1.0, s + hm + 1.5, n + 1.5 + a, 1.0 / (x * x))
    val = pref * tail * f
    return val * x if par else val


def _matched_outside(n: int, s: float, x: np.ndarray) -> np.ndarray:
    h = _half(n)
    hm = (n - 1) // 2
    par = n - 2 * h
    pref = (-sinpi(s) * 2.0 ** (-n) / math.sqrt(math.pi)
            * gamma_product((n + s + 1.0, n + 2.0 * s + 1.0), (n + 1.0, n + s + 1.5)))
    ax = np.abs(x)
    tail = ax ** (-2.0 * hm - 2.0 * s - 3.0)
    f = hyp2f1(s + hm + 1.5, s + h + 1.0, n + s + 1.5, 1.0 / (x * x))
    val = pref * tail * f
    return val * x if par else val


def extended_p(n: int, params: ExtendedParams, x):
    """Fractional Laplacian image of Q_n^(a,a), evaluated anywhere off |x|=1."""
    _require_degree(params, n)
    a, s = params.a, params.s
    xarr = np.atleast_1d(np.asarray(x, dtype=float))
    _check_singular(xarr)
    out = np.empty_like(xarr)
    inside = np.abs(xarr) < 1.0
    if np.any(inside):
        xi = xarr[inside]
        if a == s:
            out[inside] = inside_scale(s, n) * jacobi_p(n, JacobiParams(s, s), xi)
        else:
            out[inside] = _general_inside(n, a, s, xi)
    if np.any(~inside):
        xo = xarr[~inside]
        if a == s:
            out[~inside] = _matched_outside(n, s, xo)
        else:
            out[~inside] = _general_outside(n, a, s, xo)
    return float(out[0]) if np.ndim(x) == 0 else out


def extended_p_batch(n_max: int, params: ExtendedParams, xs) -> np.ndarray:
    """All degrees 0..n_max of the extended family at the given points.

    Inside (-1,1) with a = s the rows are Jacobi recurrence rows scaled by
    the per-degree constants of the matched-weight identity; elsewhere each
    degree is evaluated by its hypergeometric branch directly (the shared
    three-term recurrence does not hold across the extended family).
    Rows for degrees below the admissible range (s = -1/2, n = 0) are NaN.
    """
    a, s = params.a, params.s
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    _check_singular(xs)
    n_lo = 1 if s == -0.5 else 0
    rows = np.full((n_max + 1, xs.size), np.nan)
    inside = np.abs(xs) < 1.0
    if np.any(inside):
        xi = xs[inside]
        if a == s:
            jac = jacobi_rows(n_max, JacobiParams(s, s), xi)
            for n in range(n_lo, n_max + 1):
                rows[n, inside] = inside_scale(s, n) * jac[n]
        else:
            for n in range(n_lo, n_max + 1):
                rows[n, inside] = _general_inside(n, a, s, xi)
    if np.any(~inside):
        xo = xs[~inside]
        for n in range(n_lo, n_max + 1):
            if a == s:
                rows[n, ~inside] = _matched_outside(n, s, xo)
            else:
                rows[n, ~inside] = _general_outside(n, a, s, xo)
    return rows


def affine_eval(family_eval, interval: Interval, x):
    """Evaluate an affine-mapped family member: f^I(x) = f(y(x)).

    The fractional-operator dilation factor ((b-a)/2)^(-2s) attached to
    mapped operator images is owned by the frame module, not applied here.
    """
    return family_eval(interval.map_in(x))
