# cython: language_level=3
"""Compiled hot loops: per-sample trace filling and the two-probe baseline walk.

Arithmetic here must stay bit-identical to the NumPy fallback in
``_core_py``: plain IEEE double ops in the same order, no fused or
fast-math shortcuts, and all randomness supplied by the caller as a
pre-drawn array.
"""

from libc.math cimport pow


cdef inline double _feval(int family, double c0, double c1, double c2, double x) noexcept nogil:
    # family 0: c1*(x-c0)^2 ; family 1: c1*(x-c0)^2 + c2*(x-c0)^4
    cdef double r = x - c0
    cdef double r2 = r * r
    if family == 0:
        return c1 * r2
    return c1 * r2 + c2 * (r2 * r2)


def fill_block(double[::1] xcol, double[::1] ycol, double[::1] rcol,
               long long[::1] pcol, double[::1] lcol, signed char[::1] ecol,
               Py_ssize_t start, Py_ssize_t k,
               double x, double fx, double inst,
               long long phase, double lag,
               signed char ev_first, signed char ev_rest,
               double[::1] noise):
    """Record k samples taken at a single point x.

    ``noise`` holds k pre-drawn perturbations, or is empty for a noiseless
    oracle. The first entry gets ``ev_first``, the rest ``ev_rest``.
    """
    cdef Py_ssize_t i, j
    cdef bint has_noise = noise.shape[0] > 0
    with nogil:
        for i in range(k):
            j = start + i
            xcol[j] = x
            if has_noise:
                ycol[j] = fx + noise[i]
            else:
                ycol[j] = fx
            rcol[j] = inst
            pcol[j] = phase
            lcol[j] = lag
            ecol[j] = ev_rest
        ecol[start] = ev_first


def kw_loop(int family, double c0, double c1, double c2,
            double p_min, double p_max, double f_star,
            double kw_a, double kw_c, double x1,
            double[::1] noise,
            double[::1] xcol, double[::1] ycol, double[::1] rcol,
            Py_ssize_t start, Py_ssize_t budget):
    """Two-probe stochastic-approximation walk (no monotonicity constraint).

    At step k the center x_k is probed at x_k +- c_k with c_k = kw_c*k^-1/4,
    then moved by -a_k * g with a_k = kw_a/k and g the noisy central secant.
    Probes are kept inside [p_min, p_max] by clamping c_k and the center.
    Returns (samples_used, final_center).
    """
    cdef Py_ssize_t used = 0
    cdef long long k = 1
    cdef double x = x1
    cdef double half_range = (p_max - p_min) / 2.0
    cdef double c_k, xm, xp, fm, fp, ym, yp, g, a_k
    cdef bint has_noise = noise.shape[0] > 0
    cdef Py_ssize_t j

    with nogil:
        while used + 2 <= budget:
            c_k = kw_c * pow(<double>k, -0.25)
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
            a_k = kw_a / <double>k
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
