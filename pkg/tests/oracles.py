"""Independent numerical oracles used by the test suite only.

Nothing here shares code paths with the library's hypergeometric
evaluation: the fractional Laplacian is applied through adaptive
quadrature of its principal-value definition, and reference special
function values come from arbitrary-precision series.
"""
from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy.integrate import quad

from fracframes.basis1d import Interval, JacobiParams, weighted_q
from fracframes.specfun import quad_rule


def frac_lap_constant(d: int, s: float) -> float:
    """c_{d,s} = 4^s Gamma(d/2+s) / (pi^{d/2} |Gamma(-s)|)."""
    return (4.0 ** s * float(mp.gamma(d / 2.0 + s))
            / (math.pi ** (d / 2.0) * abs(float(mp.gamma(-s)))))


def frac_lap_1d(u, x: float, s: float, support: tuple[float, float] | None,
                tail: float | None = None, tol: float = 1e-11) -> float:
    """(-Delta)^s u(x) for s in (0,1) via singularity-subtracted quadrature.

    Uses the symmetrized form c int_0^inf (2u(x)-u(x+h)-u(x-h)) h^{-1-2s} dh
    with the h-integral split at the kinks where x +- h crosses the edges of
    `support` (weight singularities); `support=None` means globally smooth
    decaying u (integrate the symmetrized difference out to infinity).
    """
    c = frac_lap_constant(1, s)
    ux = u(x)

    def integrand(h):
        return (2.0 * ux - u(x + h) - u(x - h)) / h ** (1.0 + 2.0 * s)

    if support is not None:
        lo, hi = support
        breaks = sorted({abs(x - lo), abs(x - hi), abs(x + lo) if False else abs(x - lo)})
        breaks = sorted({abs(x - lo), abs(x - hi)})
        pieces = [b for b in breaks if b > 0.0]
        total = 0.0
        left = 0.0
        for b in pieces:
            val, _ = quad(integrand, left, b, limit=400, epsabs=1e-13, epsrel=tol)
            total += val
            left = b
        # beyond the support both shifted terms vanish: analytic tail
        total += 2.0 * ux * left ** (-2.0 * s) / (2.0 * s)
        return c * total
    cut = tail if tail is not None else max(4.0, 4.0 * abs(x))
    val1, _ = quad(integrand, 0.0, cut, limit=400, epsabs=1e-13, epsrel=tol,
                   points=[b for b in (abs(x - 1.0), abs(x + 1.0)) if 0.0 < b < cut])
    val2, _ = quad(integrand, cut, np.inf, limit=400, epsabs=1e-13, epsrel=tol)
    return c * (val1 + val2)


def frac_lap_weighted_jacobi(n: int, a: float, s: float, x: float,
                             interval: Interval | None = None) -> float:
    """Oracle value of (-Delta)^s applied to (the affine-mapped) Q_n^(a,a)."""
    params = JacobiParams(a, a)
    if interval is None:
        u = lambda t: weighted_q(n, params, t)
        lo, hi = -1.0, 1.0
    else:
        u = lambda t: weighted_q(n, params, interval.map_in(t))
        lo, hi = interval.a, interval.b
    if abs(x - lo) < 1e-9 or abs(x - hi) < 1e-9:
        raise ValueError("oracle point too close to a weight singularity")
    if x < lo or x > hi:
        # u vanishes at x: plain weighted integral over the support
        c = frac_lap_constant(1, s)
        val, _ = quad(lambda y: u(y) * abs(x - y) ** (-1.0 - 2.0 * s),
                      lo, hi, limit=400, epsabs=1e-13, epsrel=1e-11)
        return -c * val
    return frac_lap_1d(u, x, s, support=(lo, hi))


def frac_lap_disc_exterior(radial_u, s: float, r: float, n_rad: int = 200,
                           n_ang: int = 512) -> float:
    """(-Delta)^s of a radial function supported on the unit disc, at r > 1.

    radial_u(t) must include the (1-t^2)^s edge weight;  the quadrature
    resolves it with a Gauss-Jacobi rule in t^2 and a trapezoid rule in
    angle (both spectrally accurate for exterior evaluation points).
    """
    if r <= 1.0:
        raise ValueError("exterior oracle needs r > 1")
    c = frac_lap_constant(2, s)
    # substitute t^2 = (u+1)/2: dt t = du/4, (1-t^2)^s = 2^(-s) (1-u)^s
    rule = quad_rule("gauss-jacobi", n_rad, (s, 0.0))
    ts = np.sqrt((rule.nodes + 1.0) / 2.0)
    smooth = np.array([radial_u(t) / (1.0 - t * t) ** s for t in ts])
    theta = (np.arange(n_ang) + 0.5) * (2.0 * math.pi / n_ang)
    total = 0.0
    for t, w, g in zip(ts, rule.weights, smooth):
        d2 = r * r + t * t - 2.0 * r * t * np.cos(theta)
        ang = np.mean(d2 ** (-1.0 - s)) * 2.0 * math.pi
        total += w * g * ang * 2.0 ** (-s) / 4.0
    return -c * total


# ---------------------------------------------------------------------------
# arbitrary-precision series (direct definitions, no transformations)


def mp_hyp2f1_series(a, b, c, z, dps: int = 40, max_terms: int = 4000) -> float:
    """Direct compensated 2F1 power series at high precision; |z| < 1."""
    with mp.workdps(dps):
        a, b, c, z = map(mp.mpf, (a, b, c, z))
        term = mp.mpf(1)
        total = mp.mpf(1)
        for k in range(max_terms):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
            total += term
            if abs(term) < mp.mpf(10) ** (-dps) * abs(total):
                break
        return float(total)


def mp_hyp1f1_series(a, b, z, dps: int = 40, max_terms: int = 6000) -> float:
    """Direct 1F1 power series at high precision (any real z)."""
    with mp.workdps(dps):
        a, b, z = map(mp.mpf, (a, b, z))
        term = mp.mpf(1)
        total = mp.mpf(1)
        for k in range(max_terms):
            term *= (a + k) / ((b + k) * (k + 1)) * z
            total += term
            if abs(term) < mp.mpf(10) ** (-dps) * abs(total) and k > abs(z):
                break
        return float(total)


def mp_gamma(x, dps: int = 40) -> float:
    with mp.workdps(dps):
        return float(mp.gamma(x))
