"""Pure numpy implementations of the hot kernels.

Signatures mirror the compiled ``_kernels`` extension exactly; see
``mobopc._backend`` for how one of the two is selected at import.
"""

import numpy as np


def dominance_products(upper, factors, shape):
    """Product of ``factors[j]`` over every ``j`` with ``upper[j] >= c``.

    Parameters
    ----------
    upper : (N, m) int array
        Index of the highest grid cell each point covers along every axis.
    factors : (N,) float array
    shape : tuple of int
        Grid shape.

    Returns
    -------
    ndarray of ``shape``; entry ``c`` is ``prod_{j : upper[j] >= c} factors[j]``.
    """
    shape = tuple(int(s) for s in shape)
    out = np.ones(shape)
    upper = np.asarray(upper, dtype=np.intp)
    if upper.shape[0]:
        np.multiply.at(out, tuple(upper.T), np.asarray(factors, dtype=float))
    for axis in range(len(shape)):
        out = np.flip(np.cumprod(np.flip(out, axis), axis=axis), axis)
    return np.ascontiguousarray(out)


def box_integrals(tables, shape, axes, offsets, samples):
    """Integral of a piecewise-constant weight over ``[z, y]`` for every sample ``y``.

    ``tables[S]`` holds the mixed prefix sums for axis subset ``S`` (bit ``d``
    set means axis ``d`` is the partially covered one), flattened in C order
    over ``shape``. ``axes[offsets[d]:offsets[d+1]]`` are the sorted grid
    coordinates of axis ``d``, the first one being the reference point.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    n_samples, m = samples.shape
    shape = np.asarray(shape, dtype=np.intp)
    strides = np.ones(m, dtype=np.intp)
    for d in range(m - 2, -1, -1):
        strides[d] = strides[d + 1] * shape[d + 1]

    valid = np.ones(n_samples, dtype=bool)
    flat = np.zeros(n_samples, dtype=np.intp)
    frac = np.empty((n_samples, m))
    for d in range(m):
        coords = axes[offsets[d]:offsets[d + 1]]
        y = samples[:, d]
        valid &= y > coords[0]
        idx = np.searchsorted(coords, y, side="right") - 1
        idx = np.clip(idx, 0, len(coords) - 1)
        frac[:, d] = y - coords[idx]
        flat += idx * strides[d]

    out = np.zeros(n_samples)
    for subset in range(1 << m):
        w = np.ones(n_samples)
        for d in range(m):
            if subset >> d & 1:
                w *= frac[:, d]
        out += w * tables[subset][flat]
    out[~valid] = 0.0
    return out


def sperp_mask(grads, generators, rel_tol):
    """Per-round pass flags of the perpendicular-cone test.

    Parameters
    ----------
    grads : (R, n, m) array
        Row ``grads[r, j]`` is the vector of objective derivatives along design axis ``j``.
    generators : (B, m, m) array
        Extreme directions of each cone, one per row.
    rel_tol : float
        Projections with magnitude ``<= rel_tol * ||v||_2`` count as zero.

    Returns
    -------
    (R,) uint8 array, 1 where every axis passes for every cone.
    """
    grads = np.asarray(grads, dtype=float)
    generators = np.asarray(generators, dtype=float)
    proj = np.einsum("bki,rji->rbjk", generators, grads)
    norm2 = np.sqrt(np.sum(grads * grads, axis=2))
    tol = rel_tol * norm2
    zero_vec = np.max(np.abs(grads), axis=2) <= tol
    signs = np.where(np.abs(proj) <= tol[:, None, :, None], 0.0, np.sign(proj))
    mixed = np.any(signs != signs[..., :1], axis=3)
    ok = mixed | zero_vec[:, None, :]
    return np.all(ok, axis=(1, 2)).astype(np.uint8)
