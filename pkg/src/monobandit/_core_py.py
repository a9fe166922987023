"""Pure-Python/NumPy fallback for the compiled kernels.

Every operation mirrors ``_core.pyx`` instruction-for-instruction so the
two backends produce bit-identical traces from the same noise stream.
"""

from __future__ import annotations

import numpy as np


def _feval(family: int, c0: float, c1: float, c2: float, x: float) -> float:
    r = x - c0
    r2 = r * r
    if family == 0:
        return c1 * r2
    return c1 * r2 + c2 * (r2 * r2)


def fill_block(xcol, ycol, rcol, pcol, lcol, ecol, start, k,
               x, fx, inst, phase, lag, ev_first, ev_rest, noise):
    """Record k samples taken at a single point x (vectorized)."""
    sl = slice(start, start + k)
    xcol[sl] = x
    if noise.shape[0] > 0:
        np.add(noise, fx, out=ycol[sl])
    else:
        ycol[sl] = fx
    rcol[sl] = inst
    pcol[sl] = phase
    lcol[sl] = lag
    ecol[sl] = ev_rest
    ecol[start] = ev_first


def kw_loop(family, c0, c1, c2, p_min, p_max, f_star, kw_a, kw_c, x1,
            noise, xcol, ycol, rcol, start, budget):
    """Two-probe stochastic-approximation walk; see the compiled twin."""
    used = 0
    k = 1
    x = x1
    half_range = (p_max - p_min) / 2.0
    has_noise = noise.shape[0] > 0
    while used + 2 <= budget:
        c_k = kw_c * float(k) ** -0.25
        if c_k > half_range:
            c_k = half_range
        if x < p_min + c_k:
            x = p_min + c_k
        elif x > p_max - c_k:
            x = p_max - c_k
        xm = x - c_k
        xp = x + c_k
        fm = _feval(family, c0, c1, c2, xm)
        fp = _feval(family, c0, c1, c2, xp)
        ym = fm + noise[used] if has_noise else fm
        yp = fp + noise[used + 1] if has_noise else fp
        j = start + used
        xcol[j] = xm
        ycol[j] = ym
        rcol[j] = fm - f_star
        xcol[j + 1] = xp
        ycol[j + 1] = yp
        rcol[j + 1] = fp - f_star
        used += 2
        g = (yp - ym) / (2.0 * c_k)
        a_k = kw_a / float(k)
        x = x - a_k * g
        k += 1
    if x < p_min:
        x = p_min
    elif x > p_max:
        x = p_max
    if used < budget:
        fm = _feval(family, c0, c1, c2, x)
        ym = fm + noise[used] if has_noise else fm
        j = start + used
        xcol[j] = x
        ycol[j] = ym
        rcol[j] = fm - f_star
        used += 1
    return used, x
