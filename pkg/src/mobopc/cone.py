"""Preference cones over objective weights and the perpendicular-set test.

A preference tuple ``(i0, i1, ..., iQ)`` says objective ``i0`` should be at
least as stable as ``i1``, and so on. Its admissible weight vectors form
the polyhedral cone ``{s >= 0, s != 0 : s[i0] >= s[i1] >= ... >= s[iQ]}``.
A point satisfies the preference when, for every design axis, the vector of
objective derivatives along that axis is orthogonal to some admissible
weight vector. Whether such a weight vector exists is decided from the
signs of the projections of the derivative vector onto the cone's extreme
directions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ContractError

DEFAULT_REL_TOL = 1e-9


@dataclass(frozen=True)
class PreferenceTuple:
    """Ordered objective indices, most stable-preferred first."""

    indices: tuple[int, ...]
    num_objectives: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        m = int(self.num_objectives)
        if m < 2:
            raise ContractError("need at least two objectives")
        if len(idx) < 2:
            raise ContractError("a preference tuple needs at least two indices")
        if len(set(idx)) != len(idx):
            raise ContractError(f"repeated objective index in {idx}")
        if any(i < 0 or i >= m for i in idx):
            raise ContractError(f"objective index out of range in {idx} for m={m}")

    @property
    def depth(self):
        """Number of pairwise orderings ``Q``."""
        return len(self.indices) - 1

    @property
    def order(self):
        """Objective axis sitting at each canonical position.

        The tuple's indices first, then the unconstrained objectives in
        ascending order.
        """
        rest = [i for i in range(self.num_objectives) if i not in self.indices]
        return self.indices + tuple(rest)

    def __str__(self):
        return ">".join(str(i) for i in self.indices)


def parse_preference(spec, num_objectives):
    """Build a :class:`PreferenceTuple` from ``"0>1>2"``, ``"0,1"`` or a sequence."""
    if isinstance(spec, PreferenceTuple):
        return spec
    if isinstance(spec, str):
        parts = [p for p in re.split(r"[>,\s]+", spec.strip()) if p]
        try:
            spec = [int(p) for p in parts]
        except ValueError:
            raise ContractError(f"cannot parse preference {spec!r}") from None
    return PreferenceTuple(tuple(spec), num_objectives)


def canonical_vectors(m, depth):
    """Normals and extreme directions for the canonical tuple ``(0, ..., depth)``.

    Returns
    -------
    normals, generators : (m, m) arrays
        Row ``i`` of ``normals`` is the half-space normal ``a_i``; row ``i`` of
        ``generators`` is the extreme direction paired with it.
    """
    if not 1 <= depth < m:
        raise ContractError(f"depth must lie in [1, {m - 1}]")
    normals = np.zeros((m, m))
    generators = np.zeros((m, m))
    for i in range(m):
        if i < depth:
            normals[i, i] = 1.0 / np.sqrt(2.0)
            normals[i, i + 1] = -1.0 / np.sqrt(2.0)
        else:
            normals[i, i] = 1.0
        if i <= depth:
            generators[i, : i + 1] = 1.0 / np.sqrt(i + 1.0)
        else:
            generators[i, i] = 1.0
    return normals, generators


@dataclass(frozen=True, eq=False)
class ConeBasis:
    """Both representations of a preference cone in user objective order.

    Attributes
    ----------
    normals : (m, m) array
        Row ``i`` is the polyhedral normal ``a_i``; the cone is ``{s : normals @ s >= 0}``.
    generators : (m, m) array
        Row ``i`` is the extreme direction; the cone is their non-negative span.
    permutation : tuple of int
        Objective axis occupying each canonical position.
    preference : PreferenceTuple
    """

    normals: np.ndarray
    generators: np.ndarray
    permutation: tuple[int, ...]
    preference: PreferenceTuple

    @property
    def num_objectives(self):
        return self.normals.shape[1]


def build_basis(pref):
    """Cone basis for a preference tuple, permuted to the user's objective order."""
    m = pref.num_objectives
    normals_c, generators_c = canonical_vectors(m, pref.depth)
    perm = pref.order
    normals = np.zeros((m, m))
    generators = np.zeros((m, m))
    # canonical coordinate l lives on objective axis perm[l]
    normals[:, list(perm)] = normals_c
    generators[:, list(perm)] = generators_c
    return ConeBasis(normals, generators, perm, pref)


def _sign(values, tol):
    return np.where(np.abs(values) <= tol, 0, np.sign(values)).astype(int)


def in_s_perp(basis, v, tol=None):
    """Whether some admissible weight vector is orthogonal to ``v``.

    Parameters
    ----------
    basis : ConeBasis
    v : (m,) array
    tol : float, optional
        Projections with ``|b| <= tol`` count as zero. Defaults to
        ``1e-9 * ||v||_2``.
    """
    v = np.asarray(v, dtype=float)
    if tol is None:
        tol = DEFAULT_REL_TOL * float(np.linalg.norm(v))
    if np.max(np.abs(v), initial=0.0) <= tol:
        return True
    signs = _sign(basis.generators @ v, tol)
    return bool(np.any(signs != signs[0]))


def satisfies_preference(gradients, basis, tol=None):
    """Apply :func:`in_s_perp` to every design-axis row of an ``(n, m)`` gradient matrix."""
    gradients = np.atleast_2d(np.asarray(gradients, dtype=float))
    if gradients.shape[1] != basis.num_objectives:
        raise ContractError("gradient matrix must have one column per objective")
    return all(in_s_perp(basis, row, tol) for row in gradients)
