"""Pure-numpy fallback for the compiled kernels in ``_kernels.pyx``.

Selected at import time when the extension is unavailable (or when
``MCOUTPUT_PURE=1``). The scalar recursions replay the compiled arithmetic
operation-for-operation, so both backends produce bitwise-identical chains;
the spectral sum uses per-lag BLAS products and agrees to rounding error.
"""

import math

import numpy as np


def var1_recurrence(phi, start, eps, out):
    n, p = out.shape
    if phi.shape != (p, p) or start.shape != (p,):
        raise ValueError("dimension mismatch in var1_recurrence")
    if eps.shape != (n - 1, p):
        raise ValueError("eps must have shape (n - 1, p)")
    out[0] = start
    cols = [np.ascontiguousarray(phi[:, j]) for j in range(p)]
    for t in range(1, n):
        acc = eps[t - 1].copy()
        prev = out[t - 1]
        for j in range(p):
            acc += cols[j] * prev[j]
        out[t] = acc
    return None


def _mixture_density(x, w1, mu1, v1, norm1, w2, mu2, v2, norm2):
    d1 = x - mu1
    d2 = x - mu2
    return (w1 * norm1 * math.exp(-0.5 * d1 * d1 / v1)
            + w2 * norm2 * math.exp(-0.5 * d2 * d2 / v2))


def rwm_mixture_chain(start, sd, z, u, w1, mu1, v1, w2, mu2, v2, out):
    n = out.shape[0]
    if z.shape[0] != n or u.shape[0] != n:
        raise ValueError("z and u must have length n")
    pi2 = 6.283185307179586476925287
    norm1 = 1.0 / math.sqrt(pi2 * v1)
    norm2 = 1.0 / math.sqrt(pi2 * v2)
    x = float(start)
    fx = _mixture_density(x, w1, mu1, v1, norm1, w2, mu2, v2, norm2)
    accepted = 0
    for t in range(n):
        y = x + sd * z[t]
        fy = _mixture_density(y, w1, mu1, v1, norm1, w2, mu2, v2, norm2)
        if u[t] * fx < fy:
            x = y
            fx = fy
            accepted += 1
        out[t] = x
    return accepted


def gibbs_boomerang_chain(x0, y0, z, a, b, c, out):
    n = out.shape[0]
    if z.shape != (n, 2) or out.shape[1] != 2:
        raise ValueError("z and out must have shape (n, 2)")
    x = float(x0)
    y = float(y0)
    for t in range(n):
        prec = a * y * y + 1.0
        x = (b * y + c) / prec + z[t, 0] / math.sqrt(prec)
        prec = a * x * x + 1.0
        y = (b * x + c) / prec + z[t, 1] / math.sqrt(prec)
        out[t, 0] = x
        out[t, 1] = y
    return None


def sv_accumulate(data, weights):
    n, p = data.shape
    bn = weights.shape[0]
    out = data.T @ data
    for k in range(1, bn):
        g = data[: n - k].T @ data[k:]
        out += weights[k] * (g + g.T)
    return out
