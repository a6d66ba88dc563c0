# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hinge-loss training kernel.

Bit-identical twin of ``policylens._pegasos_py``: the same scalar float64
operations in the same order, compiled with -ffp-contract=off so no
fused-multiply-add changes the rounding. Any intercept is the caller's
business (append a constant feature).
"""

from libc.math cimport sqrt
from libc.stdint cimport int64_t

cdef double RESCALE_FLOOR = 1e-120


def run_epoch(
    double[::1] v,
    const int64_t[::1] indices,
    const double[::1] values,
    const int64_t[::1] indptr,
    const double[::1] ys,
    const double[::1] xnorm2,
    const int64_t[::1] order,
    long long t,
    double lam,
    double s,
    double wnorm2,
):
    """One pass over ``order``; mutates ``v`` in place.

    Returns updated ``(t, s, wnorm2)``. ``t`` counts per-sample steps
    across epochs; the step size is eta_t = 1 / (lam * t).
    """
    cdef double inv_lam = 1.0 / lam
    cdef Py_ssize_t dim = v.shape[0]
    cdef Py_ssize_t n_steps = order.shape[0]
    cdef Py_ssize_t pos, k, lo, hi
    cdef int64_t i, j
    cdef double eta, factor, dot, wx, y, coef, scale, proj

    for pos in range(n_steps):
        i = order[pos]
        t += 1
        eta = 1.0 / (lam * t)
        if t > 1:
            factor = 1.0 - eta * lam
            s = s * factor
            wnorm2 = wnorm2 * (factor * factor)
        lo = indptr[i]
        hi = indptr[i + 1]
        dot = 0.0
        for k in range(lo, hi):
            dot = dot + v[indices[k]] * values[k]
        wx = s * dot
        y = ys[i]
        if y * wx < 1.0:
            coef = eta * y
            scale = coef / s
            for k in range(lo, hi):
                j = indices[k]
                v[j] = v[j] + scale * values[k]
            wnorm2 = wnorm2 + 2.0 * coef * wx + (coef * coef) * xnorm2[i]
            if wnorm2 > inv_lam:
                proj = sqrt(inv_lam / wnorm2)
                s = s * proj
                wnorm2 = wnorm2 * (proj * proj)
        if s < RESCALE_FLOOR:
            for k in range(dim):
                v[k] = v[k] * s
            s = 1.0
    return t, s, wnorm2
