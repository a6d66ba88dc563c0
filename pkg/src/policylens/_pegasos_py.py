"""Pure-Python hinge-loss training kernel.

Drop-in fallback for the compiled ``_pegasos_cy`` extension. Both kernels
perform the same scalar float64 operations in the same order (the extension
is compiled with contraction disabled), so trained models are bit-identical
regardless of which backend runs.

The parameter vector is kept as ``w = s * v`` so the per-step
regularization shrink is O(1); the squared norm of ``w`` is maintained
incrementally for the projection onto the ball of radius 1/sqrt(lam).
Any intercept is the caller's business (append a constant feature).
"""

from __future__ import annotations

from math import sqrt

_RESCALE_FLOOR = 1e-120


def run_epoch(v, indices, values, indptr, ys, xnorm2, order, t, lam, s, wnorm2):
    """One pass over ``order``; mutates ``v`` in place.

    Returns updated ``(t, s, wnorm2)``. ``t`` counts per-sample steps
    across epochs; the step size is eta_t = 1 / (lam * t).
    """
    # memoryviews read back native python floats/ints, which keeps the
    # arithmetic identical to the C kernel and is faster than ndarray
    # scalar indexing
    v_m = memoryview(v)
    idx_m = memoryview(indices)
    val_m = memoryview(values)
    ptr_m = memoryview(indptr)
    ys_m = memoryview(ys)
    xn_m = memoryview(xnorm2)
    order_m = memoryview(order)

    inv_lam = 1.0 / lam
    dim = v.shape[0]
    for pos in range(len(order_m)):
        i = order_m[pos]
        t += 1
        eta = 1.0 / (lam * t)
        if t > 1:
            factor = 1.0 - eta * lam
            s = s * factor
            wnorm2 = wnorm2 * (factor * factor)
        lo = ptr_m[i]
        hi = ptr_m[i + 1]
        dot = 0.0
        for k in range(lo, hi):
            dot = dot + v_m[idx_m[k]] * val_m[k]
        wx = s * dot
        y = ys_m[i]
        if y * wx < 1.0:
            coef = eta * y
            scale = coef / s
            for k in range(lo, hi):
                j = idx_m[k]
                v_m[j] = v_m[j] + scale * val_m[k]
            wnorm2 = wnorm2 + 2.0 * coef * wx + (coef * coef) * xn_m[i]
            if wnorm2 > inv_lam:
                proj = sqrt(inv_lam / wnorm2)
                s = s * proj
                wnorm2 = wnorm2 * (proj * proj)
        if s < _RESCALE_FLOOR:
            for d in range(dim):
                v_m[d] = v_m[d] * s
            s = 1.0
    return t, s, wnorm2
