"""Dominated hypervolume on axis-sorted cell grids.

Maximisation convention throughout: ``a`` weakly dominates ``b`` when
``a >= b`` componentwise. The reference point ``z`` is the lower corner of
the measured region and only points strictly above it contribute.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import ContractError, InvalidDataError


def _as_points(points, m=None):
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return np.zeros((0, m if m is not None else 0))
    pts = np.atleast_2d(pts)
    if not np.all(np.isfinite(pts)):
        raise InvalidDataError("objective vectors must be finite")
    return pts


def dominant_indices(points):
    """Indices of the non-dominated points.

    Exact duplicates collapse onto their first occurrence.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    if n == 0:
        return np.zeros(0, dtype=int)
    geq = np.all(pts[:, None, :] >= pts[None, :, :], axis=2)
    equal = np.all(pts[:, None, :] == pts[None, :, :], axis=2)
    strictly = geq & ~equal
    dominated = np.any(strictly, axis=0)
    # later duplicates of an earlier point
    dup = np.any(np.triu(equal, k=1), axis=0)
    return np.flatnonzero(~dominated & ~dup)


def dominant_subset(points):
    """The non-dominated subset of ``points`` (duplicates collapsed)."""
    pts = _as_points(points)
    return pts[dominant_indices(pts)]


@dataclass(frozen=True, eq=False)
class CellGrid:
    """Tiling of the box between ``z`` and the componentwise max of the points.

    ``axes[d]`` holds ``z[d]`` followed by the distinct point coordinates
    above it. Cell ``c`` spans ``[axes[d][c[d]], axes[d][c[d] + 1]]`` on each
    axis; its upper corner is the cell's dominant corner.
    """

    axes: tuple[np.ndarray, ...]
    points: np.ndarray
    excluded: int

    @property
    def shape(self):
        return tuple(len(a) - 1 for a in self.axes)

    @property
    def num_cells(self):
        return int(np.prod(self.shape)) if self.axes else 0

    @property
    def volumes(self):
        """Cell volumes, array of ``shape``."""
        vol = np.ones(self.shape)
        for d, ax in enumerate(self.axes):
            view = [1] * len(self.axes)
            view[d] = -1
            vol = vol * np.diff(ax).reshape(view)
        return vol

    @property
    def upper_corners(self):
        """``(num_cells, m)`` dominant corners, C order over ``shape``."""
        grids = np.meshgrid(*[ax[1:] for ax in self.axes], indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1)

    @property
    def lower_corners(self):
        grids = np.meshgrid(*[ax[:-1] for ax in self.axes], indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1)

    def cover_index(self):
        """Highest cell index each point covers along each axis."""
        idx = np.empty(self.points.shape, dtype=np.intp)
        for d, ax in enumerate(self.axes):
            idx[:, d] = np.searchsorted(ax, self.points[:, d]) - 1
        return idx

    def products(self, factors):
        """Per cell, the product of ``factors[j]`` over points covering it."""
        if self.num_cells == 0:
            return np.ones(self.shape)
        return kernels.dominance_products(self.cover_index(), np.asarray(factors, float), self.shape)


def _split_above(points, z):
    pts = _as_points(points, len(z))
    if pts.shape[0] == 0:
        return pts, np.zeros(0, dtype=bool)
    keep = np.all(pts > z, axis=1)
    return pts[keep], keep


def build_cells(points, z, warn=False):
    """Build the cell grid of ``points`` above reference ``z``.

    Points not strictly above ``z`` are dropped and counted in ``excluded``.
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    kept, keep = _split_above(points, z)
    excluded = int(np.sum(~keep))
    if excluded and warn:
        warnings.warn(f"{excluded} point(s) do not dominate the reference point", stacklevel=2)
    if kept.shape[0] == 0:
        axes = tuple(np.array([zd]) for zd in z)
    else:
        axes = tuple(np.unique(np.concatenate([[z[d]], kept[:, d]])) for d in range(len(z)))
    return CellGrid(axes, kept, excluded)


def hypervolume(points, z):
    """Volume dominated by ``points`` above ``z``: the sum of volumes of dominated cells."""
    grid = build_cells(points, z)
    if grid.points.shape[0] == 0:
        return 0.0
    free = grid.products(np.zeros(grid.points.shape[0]))
    return float(np.sum(grid.volumes * (free == 0.0)))


@dataclass(frozen=True, eq=False)
class ParetoArchive:
    """Observed points with optional preference probabilities.

    ``y`` is in maximisation convention; ``probs[j]`` is the probability
    that ``x[j]`` meets the preference constraints.
    """

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    probs: np.ndarray | None = None

    def __post_init__(self):
        y = np.atleast_2d(np.asarray(self.y, dtype=float))
        z = np.asarray(self.z, dtype=float).reshape(-1)
        if y.size == 0:
            y = np.zeros((0, len(z)))
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float).reshape(y.shape[0], -1))
        if self.probs is not None:
            p = np.asarray(self.probs, dtype=float).reshape(-1)
            if p.shape[0] != y.shape[0]:
                raise ContractError("one probability per archive point is required")
            if np.any((p < 0) | (p > 1)):
                raise ContractError("probabilities must lie in [0, 1]")
            object.__setattr__(self, "probs", p)

    def __len__(self):
        return self.y.shape[0]

    def with_probs(self, probs):
        return ParetoArchive(self.x, self.y, self.z, probs)


def weighted_expected_hv(archive):
    """Expected hypervolume when each point counts only with its probability.

    Sum over cells of ``vol * (1 - prod(1 - p_j))`` taken over the points
    dominating the cell's upper corner.
    """
    if archive.probs is None:
        raise ContractError("archive points must carry probabilities")
    grid = build_cells(archive.y, archive.z)
    if grid.points.shape[0] == 0:
        return 0.0
    keep = np.all(archive.y > archive.z, axis=1)
    free = grid.products(1.0 - archive.probs[keep])
    return float(np.sum(grid.volumes * (1.0 - free)))


def _exclusive_cumsum(arr, axis):
    out = np.zeros_like(arr)
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    src[axis] = slice(None, -1)
    dst[axis] = slice(1, None)
    out[tuple(dst)] = np.cumsum(arr, axis=axis)[tuple(src)]
    return out


class ImprovementTables:
    """Exact integrals of a piecewise-constant weight over boxes ``[z, y]``.

    The weight at ``u`` is ``prod(factors[j])`` over archive points with
    ``y_j >= u``. With ``factors = 0`` the integral over ``[z, y]`` is the
    hypervolume improvement of adding ``y``; with ``factors = 1 - s_j`` it is
    the preference-weighted cell sum. The grid is built once from the
    archive; any query point only subdivides its cells, so the integral is
    identical to the sum over a grid rebuilt with the query included.
    """

    def __init__(self, points, factors, z):
        z = np.asarray(z, dtype=float).reshape(-1)
        pts, keep = _split_above(points, z)
        factors = np.asarray(factors, dtype=float).reshape(-1)
        factors = factors[keep] if factors.shape[0] == keep.shape[0] else factors
        m = len(z)
        if m > 8:
            raise ContractError("at most 8 objectives are supported")
        self.z = z
        axes = [np.unique(np.concatenate([[z[d]], pts[:, d]])) for d in range(m)]
        shape = tuple(len(a) for a in axes)
        upper = np.empty(pts.shape, dtype=np.intp)
        for d in range(m):
            upper[:, d] = np.searchsorted(axes[d], pts[:, d]) - 1
        weight = kernels.dominance_products(upper, factors, shape)
        lengths = [np.append(np.diff(a), 0.0) for a in axes]

        tables = np.empty((1 << m, int(np.prod(shape))))
        for subset in range(1 << m):
            t = weight.copy()
            for d in range(m):
                if subset >> d & 1:
                    continue
                view = [1] * m
                view[d] = -1
                t = t * lengths[d].reshape(view)
                t = _exclusive_cumsum(t, d)
            tables[subset] = t.reshape(-1)
        self.shape = np.asarray(shape, dtype=np.intp)
        self.axes = np.concatenate(axes)
        self.offsets = np.concatenate([[0], np.cumsum(shape)]).astype(np.intp)
        self.tables = tables

    def __call__(self, samples):
        """Integral for each row of ``samples``; zero when a row is not above ``z``."""
        return kernels.box_integrals(self.tables, self.shape, self.axes, self.offsets, samples)
