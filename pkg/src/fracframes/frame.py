"""Sum-space quasimatrices, operator images, collocation grids, and the
epsilon-truncated SVD least-squares machinery.

A SumSpace is an ordered, truncated concatenation of basis families; its
columns are enumerated degree-major with extended families ahead of the
weighted ones inside each degree block.  Applying an operator term swaps
weighted and extended families with shifted exponents; affine/radial
dilation contributes the covariance factor of the fractional Laplacian
to the image coefficient, never to basis evaluation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import basis1d, basis2d
from .basis1d import ExtendedParams, Interval, JacobiParams
from .basis2d import RadialScale

__all__ = [
    "InadmissibleOperatorError",
    "BasisFamily",
    "SumSpace",
    "OperatorSpec",
    "IDENTITY_OP",
    "ImageTerm",
    "ImageSpace",
    "term_image",
    "operator_image",
    "PolarGrid",
    "collocation_grid_1d",
    "collocation_grid_2d",
    "basis_matrix",
    "LsSystem",
    "assemble",
    "SolveInfo",
    "tsvd_solve",
    "expand",
]

_KINDS_1D = ("weighted-jacobi", "extended-jacobi")
_KINDS_2D = ("weighted-zernike", "extended-zernike")
_EXTENDED = ("extended-jacobi", "extended-zernike")

DEFAULT_EPS_FACTOR = 1e-14
OVERSAMPLING_TARGET = 4


class InadmissibleOperatorError(ValueError):
    """Operator term maps a family outside the evaluable parameter range."""


@dataclass(frozen=True)
class BasisFamily:
    """One affine/radially mapped family with its parameters.

    params: (a, b) weighted-jacobi, (a, s) extended-jacobi,
    (b,) weighted-zernike, (s,) extended-zernike.  fourier = (m, j)
    applies to the 2D kinds only.
    """

    kind: str
    params: tuple[float, ...]
    geometry: Interval | RadialScale
    degree_offset: int = 0
    fourier: tuple[int, int] = (0, 1)

    def __post_init__(self):
        if self.degree_offset not in (0, 1):
            raise ValueError(f"degree_offset must be 0 or 1, got {self.degree_offset}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind == "weighted-jacobi":
            a, b = self.params
            JacobiParams(a, b)
        elif self.kind == "extended-jacobi":
            a, s = self.params
            ExtendedParams(a, s)
            if s == -0.5 and self.degree_offset < 1:
                raise ValueError("s = -1/2 extended family needs degree_offset >= 1")
        elif self.kind == "weighted-zernike":
            (b,) = self.params
            if b <= -1.0:
                raise ValueError(f"Zernike weight must exceed -1, got {b}")
        elif self.kind == "extended-zernike":
            (s,) = self.params
            if not -1.0 < s < 1.0 or s == 0.0:
                raise ValueError(f"extended Zernike exponent {s} outside (-1,0) u (0,1)")
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")
        want = Interval if self.kind in _KINDS_1D else RadialScale
        if not isinstance(self.geometry, want):
            raise ValueError(f"{self.kind} needs {want.__name__} geometry")
        m, j = self.fourier
        if self.kind in _KINDS_2D:
            basis2d.ZernikeIndex(2 * self.degree_offset + m, m, j)

    @property
    def dim(self) -> int:
        return 1 if self.kind in _KINDS_1D else 2

    @property
    def is_extended(self) -> bool:
        return self.kind in _EXTENDED


@dataclass(frozen=True)
class SumSpace:
    """Ordered truncated concatenation of families (the quasimatrix S).

    Column order: for degrees d = 0, 1, 2, ... take all extended families
    in declaration order, then all weighted families, skipping degrees
    below a family's degree_offset.  n_columns, when set, cuts that stream
    to an exact total column count.
    """

    families: tuple[BasisFamily, ...]
    n_per_family: int
    n_columns: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        if not self.families:
            raise ValueError("SumSpace needs at least one family")
        dims = {f.dim for f in self.families}
        if len(dims) != 1:
            raise ValueError("cannot mix 1D and 2D families in one space")
        if self.n_per_family < 1:
            raise ValueError("n_per_family must be >= 1")

    @property
    def dim(self) -> int:
        return self.families[0].dim

    @cached_property
    def columns(self) -> tuple[tuple[int, int], ...]:
        """(family_index, degree) pairs in quasimatrix column order."""
        order = ([i for i, f in enumerate(self.families) if f.is_extended]
                 + [i for i, f in enumerate(self.families) if not f.is_extended])
        cols: list[tuple[int, int]] = []
        for d in range(self.n_per_family):
            for i in order:
                if d >= self.families[i].degree_offset:
                    cols.append((i, d))
                    if self.n_columns is not None and len(cols) == self.n_columns:
                        return tuple(cols)
        if self.n_columns is not None:
            raise ValueError(
                f"space provides only {len(cols)} columns, {self.n_columns} requested")
        return tuple(cols)

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    def truncated(self, n_columns: int) -> "SumSpace":
        return SumSpace(self.families, self.n_per_family, n_columns)


@dataclass(frozen=True)
class OperatorSpec:
    """The operator sum_k lam_k (-Delta)^(s_k); s_k = 0 is the identity."""

    terms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        terms = tuple((float(l), float(s)) for l, s in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("operator needs at least one term")
        for _, s in terms:
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"exponent {s} outside [0, 1]")


IDENTITY_OP = OperatorSpec(((1.0, 0.0),))


@dataclass(frozen=True)
class ImageTerm:
    coeff: float
    family: BasisFamily


@dataclass(frozen=True)
class ImageSpace:
    """Columnwise image L S: per source family, a sum of image families."""

    space: SumSpace
    per_family: tuple[tuple[ImageTerm, ...], ...]

    @property
    def columns(self):
        return self.space.columns


def term_image(family: BasisFamily, lam: float, s_k: float) -> ImageTerm:
    """Image of one family under lam (-Delta)^(s_k), dilation factor included."""
    if s_k == 0.0:
        return ImageTerm(lam, family)
    if family.dim == 1:
        scale = family.geometry.half_width ** (-2.0 * s_k)
        if family.kind == "weighted-jacobi":
            a, b = family.params
            if a != b:
                raise InadmissibleOperatorError(
                    f"fractional image of Q^({a},{b}) needs a symmetric weight")
            new = BasisFamily("extended-jacobi", (a, s_k), family.geometry,
                              family.degree_offset)
        else:
            a, s = family.params
            t = s + s_k
            if abs(t) < 1e-14:
                new = BasisFamily("weighted-jacobi", (a, a), family.geometry,
                                  family.degree_offset)
            elif (-0.5 < t < 0.0) or (0.0 < t < 1.0):
                new = BasisFamily("extended-jacobi", (a, t), family.geometry,
                                  family.degree_offset)
            else:
                raise InadmissibleOperatorError(
                    f"shifted exponent {s} + {s_k} leaves the admissible range")
        return ImageTerm(lam * scale, new)
    scale = family.geometry.factor ** (2.0 * s_k)
    if family.kind == "weighted-zernike":
        (b,) = family.params
        if abs(b - s_k) > 1e-12:
            raise InadmissibleOperatorError(
                f"extended Zernike image exists only for matched weight; "
                f"got weight {b} under exponent {s_k}")
        new = BasisFamily("extended-zernike", (s_k,), family.geometry,
                          family.degree_offset, family.fourier)
    else:
        (s,) = family.params
        t = s + s_k
        if abs(t) > 1e-14:
            raise InadmissibleOperatorError(
                f"(-Delta)^{s_k} of an extended Zernike family with s={s} has "
                f"no matched-weight closed form")
        new = BasisFamily("weighted-zernike", (s,), family.geometry,
                          family.degree_offset, family.fourier)
    return ImageTerm(lam * scale, new)


def operator_image(space: SumSpace, op: OperatorSpec) -> ImageSpace:
    """Describe L applied columnwise to the space."""
    per_family = tuple(
        tuple(term_image(fam, lam, s_k) for lam, s_k in op.terms)
        for fam in space.families)
    return ImageSpace(space, per_family)


# ---------------------------------------------------------------------------
# Collocation grids


def _segments_valid(segments: list[Interval], eps_offset: float):
    if eps_offset <= 0.0:
        raise ValueError("eps_offset must be positive")
    for seg in segments:
        if seg.b - seg.a <= 2.0 * eps_offset:
            raise ValueError(f"segment [{seg.a}, {seg.b}] shorter than 2*eps")
    ordered = sorted(segments, key=lambda s: s.a)
    for prev, nxt in zip(ordered, ordered[1:]):
        if nxt.a < prev.b - 1e-12:
            raise ValueError(
                f"segments [{prev.a},{prev.b}] and [{nxt.a},{nxt.b}] overlap")


def collocation_grid_1d(intervals, pts_per_segment: int, eps_offset: float,
                        exterior=()) -> np.ndarray:
    """Equally spaced points per segment, endpoints inset by eps_offset.

    Exterior pads are treated as additional segments; the total point
    count is (number of segments) * pts_per_segment.
    """
    segments = list(intervals) + list(exterior)
    _segments_valid(segments, eps_offset)
    if pts_per_segment < 1:
        raise ValueError("pts_per_segment must be >= 1")
    parts = [np.linspace(seg.a + eps_offset, seg.b - eps_offset, pts_per_segment)
             for seg in segments]
    return np.concatenate(parts)


@dataclass(frozen=True)
class PolarGrid:
    """Tensor product of inset radii and uniform angles in [0, 2pi)."""

    radii: np.ndarray
    angles: np.ndarray

    @property
    def n_points(self) -> int:
        return self.radii.size * self.angles.size

    @cached_property
    def points(self) -> np.ndarray:
        """Flattened (M, 2) Cartesian points, radius-major ordering."""
        r = np.repeat(self.radii, self.angles.size)
        t = np.tile(self.angles, self.radii.size)
        return np.column_stack((r * np.cos(t), r * np.sin(t)))


def collocation_grid_2d(radial_breaks, pts_per_segment: int, eps_offset: float,
                        n_angles: int) -> PolarGrid:
    """Inset radial segments between consecutive breaks, crossed with angles."""
    breaks = [float(b) for b in radial_breaks]
    if len(breaks) < 2 or any(b2 <= b1 for b1, b2 in zip(breaks, breaks[1:])):
        raise ValueError("radial breaks must be strictly increasing")
    if breaks[0] < 0.0:
        raise ValueError("radial breaks must be nonnegative")
    segments = [Interval(b1, b2) for b1, b2 in zip(breaks, breaks[1:])]
    radii = collocation_grid_1d(segments, pts_per_segment, eps_offset)
    if n_angles < 1:
        raise ValueError("need at least one angle")
    angles = np.arange(n_angles) * (2.0 * math.pi / n_angles)
    return PolarGrid(radii, angles)


# ---------------------------------------------------------------------------
# Assembly


def _family_columns_1d(fam: BasisFamily, degrees, x: np.ndarray) -> np.ndarray:
    y = fam.geometry.map_in(x)
    n_max = max(degrees)
    if fam.kind == "weighted-jacobi":
        rows = basis1d.weighted_rows(n_max, JacobiParams(*fam.params), y)
    else:
        rows = basis1d.extended_p_batch(n_max, ExtendedParams(*fam.params), y)
    return rows[list(degrees)].T


def _family_radial_rows(fam: BasisFamily, n_max: int, radii: np.ndarray) -> np.ndarray:
    m = fam.fourier[0]
    scaled = fam.geometry.factor * radii
    if fam.kind == "weighted-zernike":
        return basis2d.weighted_radial_rows(n_max, fam.params[0], m, scaled)
    return basis2d.extended_radial_rows(n_max, fam.params[0], m, scaled)


def _family_columns_2d(fam: BasisFamily, degrees, grid) -> np.ndarray:
    m, j = fam.fourier
    if isinstance(grid, PolarGrid):
        rows = _family_radial_rows(fam, max(degrees), grid.radii)
        ang = basis2d.angular_factor(m, j, grid.angles)
        blocks = rows[list(degrees)][:, :, None] * ang[None, None, :]
        return blocks.reshape(len(degrees), -1).T
    x, y = grid
    r = np.hypot(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    theta = np.arctan2(y, x)
    rows = _family_radial_rows(fam, max(degrees), r)
    ang = basis2d.angular_factor(m, j, theta)
    return (rows[list(degrees)] * ang[None, :]).T


def _family_columns(fam: BasisFamily, degrees, grid) -> np.ndarray:
    if fam.dim == 1:
        return _family_columns_1d(fam, degrees, np.asarray(grid, dtype=float))
    return _family_columns_2d(fam, degrees, grid)


def _grid_size(space_dim: int, grid) -> int:
    if space_dim == 1:
        return np.asarray(grid).size
    if isinstance(grid, PolarGrid):
        return grid.n_points
    return np.asarray(grid[0]).size


def basis_matrix(target: SumSpace | ImageSpace, grid) -> np.ndarray:
    """Dense evaluation of the (image) quasimatrix columns at grid points."""
    if isinstance(target, SumSpace):
        space = target
        per_family = tuple((ImageTerm(1.0, fam),) for fam in space.families)
    else:
        space = target.space
        per_family = target.per_family
    cols = space.columns
    mat = np.empty((_grid_size(space.dim, grid), len(cols)))
    for fi in range(len(space.families)):
        idx = [j for j, (i, _) in enumerate(cols) if i == fi]
        if not idx:
            continue
        degrees = [cols[j][1] for j in idx]
        block = None
        for term in per_family[fi]:
            part = term.coeff * _family_columns(term.family, degrees, grid)
            block = part if block is None else block + part
        mat[:, idx] = block
    return mat


@dataclass
class LsSystem:
    """Assembled least-squares matrix with a cached SVD factorization."""

    matrix: np.ndarray
    grid: object
    image: SumSpace | ImageSpace
    _svd: tuple | None = field(default=None, repr=False)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def svd(self):
        if self._svd is None:
            u, sig, vt = np.linalg.svd(self.matrix, full_matrices=False)
            self._svd = (u, sig, vt)
        return self._svd


def assemble(image: SumSpace | ImageSpace, grid) -> LsSystem:
    """Fill the least-squares matrix X_ij = [L S](x_i)_j row by point."""
    mat = basis_matrix(image, grid)
    m, n = mat.shape
    if m < n:
        raise ValueError(f"undersampled system: {m} points for {n} columns")
    if m < OVERSAMPLING_TARGET * n:
        warnings.warn(f"oversampling below {OVERSAMPLING_TARGET}x: M={m}, N={n}",
                      stacklevel=2)
    return LsSystem(mat, grid, image)


@dataclass(frozen=True)
class SolveInfo:
    kept_rank: int
    residual: float
    coeff_inf: float
    eps: float
    all_discarded: bool = False


def tsvd_solve(system: LsSystem, y: np.ndarray, eps: float | None = None):
    """Epsilon-truncated SVD least squares: keep singular values >= eps.

    eps defaults to 1e-14 * sigma_max.  If every singular value falls
    below eps the zero vector is returned with a warning flag set.
    """
    y = np.asarray(y, dtype=float)
    m = system.matrix.shape[0]
    if y.shape != (m,):
        raise ValueError(f"rhs has shape {y.shape}, expected ({m},)")
    u, sig, vt = system.svd
    eps_used = DEFAULT_EPS_FACTOR * sig[0] if eps is None else float(eps)
    if eps_used <= 0.0:
        raise ValueError("eps must be positive")
    keep = sig >= eps_used
    if not np.any(keep):
        warnings.warn("all singular values below eps; returning zero coefficients",
                      stacklevel=2)
        zero = np.zeros(system.matrix.shape[1])
        return zero, SolveInfo(0, float(np.linalg.norm(y)), 0.0, eps_used, True)
    coef = vt[keep].T @ ((u[:, keep].T @ y) / sig[keep])
    residual = float(np.linalg.norm(system.matrix @ coef - y))
    return coef, SolveInfo(int(np.count_nonzero(keep)), residual,
                           float(np.max(np.abs(coef))), eps_used)


def expand(space: SumSpace, op: OperatorSpec, f_samples: np.ndarray, grid,
           eps: float | None = None):
    """Fit f in the operator image of the space; the same coefficients read
    off against the original space give the solution."""
    system = assemble(operator_image(space, op), grid)
    return tsvd_solve(system, f_samples, eps)
