"""Compiled inner loops for spectral sums.

Every kernel accumulates strictly in ascending term order with a
compensated (Kahan) accumulator, and parallelism is only ever across
grid points, never across terms.  Output is therefore bit-identical
for any thread count.  fastmath stays off: it would license the
compiler to reassociate the compensated sums away.
"""

import math

import numba
import numpy as np
from numba import njit, prange

# sin(n*theta) is advanced by the three-term recurrence
#   s_{n+1} = 2 cos(theta) s_n - s_{n-1}
# whose rounding error grows like n*eps/sin(theta).  Re-seeding with a
# direct libm sin every _REFRESH steps keeps the error below ~1e-10
# even for grid points within 1e-5 of a support endpoint.
_REFRESH = 64


def set_threads(n: int) -> int:
    """Clamp ``n`` to the threads numba actually has and apply it."""
    avail = numba.config.NUMBA_NUM_THREADS
    n = max(1, min(int(n), avail))
    numba.set_num_threads(n)
    return n


@njit(cache=True, parallel=True)
def sine_series_grid(theta, c_re, c_im):  # pragma: no cover - compiled
    """Evaluate sum_n (c_re[n] + i c_im[n]) * sin((n+1)*theta_j) per grid point."""
    npts = theta.shape[0]
    nterms = c_re.shape[0]
    out_re = np.empty(npts)
    out_im = np.empty(npts)
    for j in prange(npts):
        th = theta[j]
        twoc = 2.0 * math.cos(th)
        s_prev = 0.0          # sin(0 * th)
        s_cur = math.sin(th)  # sin(1 * th)
        acc_re = 0.0
        comp_re = 0.0
        acc_im = 0.0
        comp_im = 0.0
        for k in range(nterms):
            if k > 0:
                if k % _REFRESH == 0:
                    s_prev = math.sin(k * th)
                    s_cur = math.sin((k + 1) * th)
                else:
                    s_next = twoc * s_cur - s_prev
                    s_prev = s_cur
                    s_cur = s_next
            y = c_re[k] * s_cur - comp_re
            t = acc_re + y
            comp_re = (t - acc_re) - y
            acc_re = t
            y = c_im[k] * s_cur - comp_im
            t = acc_im + y
            comp_im = (t - acc_im) - y
            acc_im = t
        out_re[j] = acc_re
        out_im[j] = acc_im
    return out_re, out_im


@njit(cache=True)
def hermite_point(n, x):  # pragma: no cover - compiled
    """L2-normalized oscillator eigenfunction phi_n(x), stable for n up to 1e5."""
    phi_prev = math.pi ** -0.25 * math.exp(-0.5 * x * x)
    if n == 0:
        return phi_prev
    phi_cur = math.sqrt(2.0) * x * phi_prev
    for k in range(1, n):
        nxt = x * math.sqrt(2.0 / (k + 1.0)) * phi_cur - math.sqrt(k / (k + 1.0)) * phi_prev
        phi_prev = phi_cur
        phi_cur = nxt
    return phi_cur


@njit(cache=True, parallel=True)
def hermite_series_grid(x, c_re, c_im, n_start):  # pragma: no cover - compiled
    """Evaluate sum_k (c_re[k] + i c_im[k]) * phi_{n_start+k}(x_j) per grid point.

    The recurrence produces every order on the way up, so the whole
    series costs the same as the highest single order.
    """
    npts = x.shape[0]
    nterms = c_re.shape[0]
    out_re = np.empty(npts)
    out_im = np.empty(npts)
    for j in prange(npts):
        xj = x[j]
        phi_prev = math.pi ** -0.25 * math.exp(-0.5 * xj * xj)
        phi_cur = math.sqrt(2.0) * xj * phi_prev
        acc_re = 0.0
        comp_re = 0.0
        acc_im = 0.0
        comp_im = 0.0
        order = 1
        for k in range(n_start, n_start + nterms):
            while order < k:
                nxt = xj * math.sqrt(2.0 / (order + 1.0)) * phi_cur \
                    - math.sqrt(order / (order + 1.0)) * phi_prev
                phi_prev = phi_cur
                phi_cur = nxt
                order += 1
            if k == 0:
                val = phi_prev if order == 1 else 0.0
            else:
                val = phi_cur
            idx = k - n_start
            y = c_re[idx] * val - comp_re
            t = acc_re + y
            comp_re = (t - acc_re) - y
            acc_re = t
            y = c_im[idx] * val - comp_im
            t = acc_im + y
            comp_im = (t - acc_im) - y
            acc_im = t
        out_re[j] = acc_re
        out_im[j] = acc_im
    return out_re, out_im
