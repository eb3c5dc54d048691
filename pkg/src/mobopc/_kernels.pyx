# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels.

Same signatures and results as ``mobopc._fallback``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

DEF MAX_DIM = 16


def dominance_products(upper, factors, shape):
    cdef Py_ssize_t[:, ::1] up = np.ascontiguousarray(upper, dtype=np.intp)
    cdef double[::1] fac = np.ascontiguousarray(factors, dtype=np.float64)
    cdef Py_ssize_t m = len(shape)
    cdef Py_ssize_t n_pts = up.shape[0]
    cdef Py_ssize_t shp[MAX_DIM]
    cdef Py_ssize_t stride[MAX_DIM]
    cdef Py_ssize_t d, j, k, i, flat, total = 1
    cdef Py_ssize_t inner, block, outer, base
    if m > MAX_DIM:
        raise ValueError("too many objectives")
    for d in range(m):
        shp[d] = shape[d]
        total *= shp[d]
    if m:
        stride[m - 1] = 1
        for d in range(m - 2, -1, -1):
            stride[d] = stride[d + 1] * shp[d + 1]

    out_arr = np.ones(total, dtype=np.float64)
    cdef double[::1] out = out_arr
    for j in range(n_pts):
        flat = 0
        for d in range(m):
            flat += up[j, d] * stride[d]
        out[flat] *= fac[j]
    # suffix products along each axis, viewing the grid as (outer, axis, inner)
    for d in range(m):
        inner = stride[d]
        block = shp[d] * inner
        for outer in range(0, total, block):
            for k in range(shp[d] - 2, -1, -1):
                base = outer + k * inner
                for i in range(inner):
                    out[base + i] *= out[base + inner + i]
    return out_arr.reshape(tuple(shape))


def box_integrals(tables, shape, axes, offsets, samples):
    cdef double[:, ::1] tab = np.ascontiguousarray(tables, dtype=np.float64)
    cdef double[::1] ax = np.ascontiguousarray(axes, dtype=np.float64)
    cdef Py_ssize_t[::1] off = np.ascontiguousarray(offsets, dtype=np.intp)
    cdef double[:, ::1] ys = np.ascontiguousarray(np.atleast_2d(samples), dtype=np.float64)
    cdef Py_ssize_t n_samples = ys.shape[0]
    cdef Py_ssize_t m = ys.shape[1]
    cdef Py_ssize_t stride[MAX_DIM]
    cdef double frac[MAX_DIM]
    cdef Py_ssize_t d, r, lo, hi, mid, flat, subset, n_sub
    cdef double y, w, acc
    cdef bint valid
    if m > MAX_DIM:
        raise ValueError("too many objectives")
    stride[m - 1] = 1
    for d in range(m - 2, -1, -1):
        stride[d] = stride[d + 1] * shape[d + 1]
    n_sub = 1 << m

    out_arr = np.zeros(n_samples, dtype=np.float64)
    cdef double[::1] out = out_arr
    for r in range(n_samples):
        valid = True
        flat = 0
        for d in range(m):
            y = ys[r, d]
            lo = off[d]
            hi = off[d + 1]
            if not (y > ax[lo]):
                valid = False
                break
            # last index with ax[idx] <= y
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if ax[mid] <= y:
                    lo = mid
                else:
                    hi = mid
            frac[d] = y - ax[lo]
            flat += (lo - off[d]) * stride[d]
        if not valid:
            continue
        acc = 0.0
        for subset in range(n_sub):
            w = 1.0
            for d in range(m):
                if (subset >> d) & 1:
                    w *= frac[d]
            acc += w * tab[subset, flat]
        out[r] = acc
    return out_arr


def sperp_mask(grads, generators, double rel_tol):
    cdef double[:, :, ::1] g = np.ascontiguousarray(grads, dtype=np.float64)
    cdef double[:, :, ::1] gen = np.ascontiguousarray(generators, dtype=np.float64)
    cdef Py_ssize_t n_rounds = g.shape[0]
    cdef Py_ssize_t n_axes = g.shape[1]
    cdef Py_ssize_t m = g.shape[2]
    cdef Py_ssize_t n_cones = gen.shape[0]
    cdef Py_ssize_t r, b, j, k, i
    cdef double norm2, ninf, tol, proj, v
    cdef int s, s0
    cdef bint passed, mixed

    out_arr = np.zeros(n_rounds, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    for r in range(n_rounds):
        passed = True
        for j in range(n_axes):
            norm2 = 0.0
            ninf = 0.0
            for i in range(m):
                v = g[r, j, i]
                norm2 += v * v
                if fabs(v) > ninf:
                    ninf = fabs(v)
            tol = rel_tol * sqrt(norm2)
            if ninf <= tol:
                continue
            for b in range(n_cones):
                mixed = False
                s0 = 0
                for k in range(m):
                    proj = 0.0
                    for i in range(m):
                        proj += gen[b, k, i] * g[r, j, i]
                    if fabs(proj) <= tol:
                        s = 0
                    elif proj > 0:
                        s = 1
                    else:
                        s = -1
                    if k == 0:
                        s0 = s
                    elif s != s0:
                        mixed = True
                        break
                if not mixed:
                    passed = False
                    break
            if not passed:
                break
        out[r] = passed
    return out_arr
