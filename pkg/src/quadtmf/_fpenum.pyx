# cython: boundscheck=False, wraparound=False, cdivision=False
"""Compiled enumeration kernel; same contract as ``_fpenum_py``.

All arithmetic is 64-bit.  The Python wrapper only calls in here after
checking that no intermediate value can overflow.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrtl

ctypedef long long i64


cdef inline i64 _isqrt(i64 q):
    if q <= 0:
        return 0
    cdef i64 r = <i64> sqrtl(<long double> q)
    while r * r > q:
        r -= 1
    while (r + 1) * (r + 1) <= q:
        r += 1
    return r


cdef inline i64 _floordiv(i64 a, i64 b):
    # cdivision is off, so // already floors
    return a // b


cdef i64 _walk(i64[::1] w, i64[:, ::1] su, i64[::1] e, i64 S, i64 budget,
               i64[::1] hist, cnp.int16_t[:, ::1] out, i64[::1] norms, int mode,
               i64 step, i64 offset):
    cdef int n = w.shape[0]
    cdef i64 count = 0
    cdef int k, j
    cdef i64 s, r, t
    cdef i64[::1] x = np.zeros(n, dtype=np.int64)
    cdef i64[::1] hi = np.zeros(n, dtype=np.int64)
    cdef i64[::1] sc = np.zeros(n, dtype=np.int64)
    cdef i64[::1] rem = np.zeros(n + 1, dtype=np.int64)
    if n == 0:
        if mode == 0:
            hist[0] += 1
        return 1
    rem[n] = budget
    k = n - 1
    # start(k)
    s = e[k]
    r = _isqrt(rem[k + 1] // w[k])
    x[k] = -_floordiv(r + s, S)
    hi[k] = _floordiv(r - s, S)
    sc[k] = s
    while True:
        if x[k] > hi[k]:
            k += 1
            if k == n:
                return count
            x[k] += 1
            continue
        t = S * x[k] + sc[k]
        rem[k] = rem[k + 1] - w[k] * t * t
        if k == 0:
            if mode == 0:
                hist[(budget - rem[0] - offset) // step] += 1
            elif mode == 2:
                for j in range(n):
                    out[count, j] = <cnp.int16_t> x[j]
                norms[count] = budget - rem[0]
            count += 1
            x[0] += 1
            continue
        k -= 1
        s = e[k]
        for j in range(k + 1, n):
            s += su[k, j] * x[j]
        r = _isqrt(rem[k + 1] // w[k])
        x[k] = -_floordiv(r + s, S)
        hi[k] = _floordiv(r - s, S)
        sc[k] = s


def _arrays(w, su, e):
    n = len(w)
    wa = np.ascontiguousarray(w, dtype=np.int64)
    sa = np.ascontiguousarray(np.array(su, dtype=np.int64).reshape(n, n))
    ea = np.ascontiguousarray(e, dtype=np.int64)
    return wa, sa, ea


def histogram(w, su, e, S, budget, step=1, offset=0):
    """Scaled norm -> count.  Every norm must be congruent to offset mod step."""
    wa, sa, ea = _arrays(w, su, e)
    hist = np.zeros((budget - offset) // step + 1, dtype=np.int64)
    dummy = np.zeros((1, 1), dtype=np.int16)
    dn = np.zeros(1, dtype=np.int64)
    _walk(wa, sa, ea, S, budget, hist, dummy, dn, 0, step, offset)
    nz = np.nonzero(hist)[0]
    return {int(v) * step + offset: int(hist[v]) for v in nz}


def count(w, su, e, S, budget):
    wa, sa, ea = _arrays(w, su, e)
    dummy = np.zeros((1, 1), dtype=np.int16)
    dn = np.zeros(1, dtype=np.int64)
    hist = np.zeros(1, dtype=np.int64)
    return int(_walk(wa, sa, ea, S, budget, hist, dummy, dn, 1, 1, 0))


def vector_array(w, su, e, S, budget):
    """(coords int16 array, scaled norms int64 array)."""
    wa, sa, ea = _arrays(w, su, e)
    n = len(w)
    total = count(w, su, e, S, budget)
    out = np.zeros((max(total, 1), max(n, 1)), dtype=np.int16)
    norms = np.zeros(max(total, 1), dtype=np.int64)
    hist = np.zeros(1, dtype=np.int64)
    _walk(wa, sa, ea, S, budget, hist, out, norms, 2, 1, 0)
    return out[:total, :n], norms[:total]


def vectors(w, su, e, S, budget):
    coords, norms = vector_array(w, su, e, S, budget)
    return [(tuple(int(c) for c in row), int(v)) for row, v in zip(coords, norms)]
