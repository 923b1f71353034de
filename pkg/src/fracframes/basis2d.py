"""Generalized Zernike polynomials, their disc-weighted versions, and the
extended Zernike functions (fractional Laplacian images) on all of R^2.

Only the matched case b = s of the extended functions exists in closed
form; the radial part of every family is a Jacobi polynomial in 2r^2-1,
so batch evaluation over radii reuses the 1D recurrence rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis1d import JacobiParams, SingularPointError, jacobi_p, jacobi_rows
from .specfun import gamma_product, hyp2f1

__all__ = [
    "ZernikeIndex",
    "RadialScale",
    "angular_factor",
    "zernike_z",
    "weighted_w",
    "extended_z",
    "weighted_radial_rows",
    "extended_radial_rows",
    "extended_radial_scale",
]

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class ZernikeIndex:
    """Degree n, Fourier mode m and sign bit j of a Zernike function."""

    n: int
    m: int
    j: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError(f"invalid Zernike index {self}")
        if self.m > self.n or (self.n - self.m) % 2 != 0:
            raise ValueError(f"need m <= n with n-m even, got {self}")
        if self.m == 0:
            if self.j != 1:
                raise ValueError(f"m = 0 forces j = 1, got {self}")
        elif self.j not in (0, 1):
            raise ValueError(f"sign bit must be 0 or 1, got {self}")

    @property
    def radial(self) -> int:
        """Radial polynomial index (n - m) / 2."""
        return (self.n - self.m) // 2


@dataclass(frozen=True)
class RadialScale:
    """Multiplicative coordinate dilation: family(x, y) = base(a_k x, a_k y).

    A factor a_k scales the unit disc of the base family onto the disc of
    radius 1/a_k.
    """

    factor: float

    def __post_init__(self):
        if not self.factor > 0.0:
            raise ValueError(f"dilation factor must be positive, got {self.factor}")

    @property
    def disc_radius(self) -> float:
        return 1.0 / self.factor


def _polar(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.hypot(x, y), np.arctan2(y, x)


def angular_factor(m: int, j: int, theta):
    """sin(m*theta + j*pi/2); theta taken in (-pi, pi] by convention."""
    if m == 0:
        return np.ones_like(np.asarray(theta, dtype=float))
    return np.sin(m * np.asarray(theta, dtype=float) + j * math.pi / 2.0)


def zernike_z(idx: ZernikeIndex, b: float, x, y):
    """Generalized Zernike polynomial Z^(b)_{n,m,j} in Cartesian coordinates."""
    if b <= -1.0:
        raise ValueError(f"weight parameter must exceed -1, got {b}")
    r, theta = _polar(x, y)
    rad = jacobi_p(idx.radial, JacobiParams(b, float(idx.m)), 2.0 * r * r - 1.0)
    out = r ** idx.m * angular_factor(idx.m, idx.j, theta) * rad
    return float(out) if np.ndim(x) == 0 and np.ndim(y) == 0 else out


def weighted_w(idx: ZernikeIndex, b: float, x, y):
    """W^(b)_{n,m,j} = (1-r^2)^b Z^(b)_{n,m,j}; exactly zero for r >= 1."""
    r, theta = _polar(x, y)
    r = np.atleast_1d(r)
    theta = np.atleast_1d(theta)
    out = np.zeros_like(r)
    inside = r < 1.0
    if np.any(inside):
        ri = r[inside]
        rad = jacobi_p(idx.radial, JacobiParams(b, float(idx.m)), 2.0 * ri * ri - 1.0)
        out[inside] = ((1.0 - ri * ri) ** b * ri ** idx.m
                       * angular_factor(idx.m, idx.j, theta[inside]) * rad)
    return float(out[0]) if np.ndim(x) == 0 and np.ndim(y) == 0 else out


def extended_radial_scale(s: float, m: int, k: int) -> float:
    """Inside-branch constant 4^s G(1+s+k) G(1+m+k+s) / (G(k+1) G(1+k+m))
    for radial index k."""
    return 4.0 ** s * gamma_product(
        (1.0 + s + k, 1.0 + m + k + s), (k + 1.0, 1.0 + k + m))


def _check_radius(r: np.ndarray):
    if np.any(np.abs(r - 1.0) < SINGULAR_TOL):
        raise SingularPointError("extended Zernike evaluated within 1e-12 of r = 1")


def _extended_radial_outside(k: int, m: int, s: float, r: np.ndarray) -> np.ndarray:
    # (-1)^k branch of the matched-weight formula at radial index k, r > 1;
    # Gamma(-k-s) sits near negative integers and is resolved by reflection
    # inside the signed log product.
    pref = ((-1.0) ** k * 4.0 ** s
            * gamma_product((1.0 + s + k, 1.0 + m + k + s),
                            (k + 1.0, -k - s, s + m + 2.0 * k + 2.0)))
    f = hyp2f1(k + s + 1.0, 1.0 + m + k + s, s + m + 2.0 * k + 2.0, 1.0 / (r * r))
    return pref * f * r ** (-2.0 * (1.0 + m + k + s))


def extended_z(idx: ZernikeIndex, s: float, x, y):
    """Extended Zernike function (matched weight b = s), s in (-1, 1), r != 1."""
    if not -1.0 < s < 1.0 or s == 0.0:
        raise ValueError(f"extended Zernike needs s in (-1,0) u (0,1), got {s}")
    k, m = idx.radial, idx.m
    r, theta = _polar(x, y)
    r = np.atleast_1d(r)
    theta = np.atleast_1d(theta)
    _check_radius(r)
    out = np.empty_like(r)
    inside = r < 1.0
    if np.any(inside):
        ri = r[inside]
        rad = jacobi_p(k, JacobiParams(s, float(m)), 2.0 * ri * ri - 1.0)
        out[inside] = extended_radial_scale(s, m, k) * ri ** m * rad
    if np.any(~inside):
        ro = r[~inside]
        out[~inside] = ro ** m * _extended_radial_outside(k, m, s, ro)
    out = out * angular_factor(m, idx.j, theta)
    return float(out[0]) if np.ndim(x) == 0 and np.ndim(y) == 0 else out


def weighted_radial_rows(k_max: int, b: float, m: int, r) -> np.ndarray:
    """Radial profiles r^m (1-r^2)_+^b P_k^(b,m)(2r^2-1), k = 0..k_max."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    rows = np.zeros((k_max + 1, r.size))
    inside = r < 1.0
    if np.any(inside):
        ri = r[inside]
        jac = jacobi_rows(k_max, JacobiParams(b, float(m)), 2.0 * ri * ri - 1.0)
        rows[:, inside] = (1.0 - ri * ri) ** b * ri ** m * jac
    return rows


def extended_radial_rows(k_max: int, s: float, m: int, r) -> np.ndarray:
    """Radial profiles of the extended family for radial indices 0..k_max."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    _check_radius(r)
    rows = np.empty((k_max + 1, r.size))
    inside = r < 1.0
    if np.any(inside):
        ri = r[inside]
        jac = jacobi_rows(k_max, JacobiParams(s, float(m)), 2.0 * ri * ri - 1.0)
        for k in range(k_max + 1):
            rows[k, inside] = extended_radial_scale(s, m, k) * ri ** m * jac[k]
    if np.any(~inside):
        ro = r[~inside]
        for k in range(k_max + 1):
            rows[k, ~inside] = ro ** m * _extended_radial_outside(k, m, s, ro)
    return rows
