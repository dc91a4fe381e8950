"""Exact short-vector enumeration for positive definite integral forms.

The hot loop lives in a compiled kernel (``_fpenum``) with a pure-Python
twin (``_fpenum_py``); the compiled one is used when it imports and the
environment variable ``QUADTMF_PURE_PYTHON`` is unset.  This module does
the exact preparation: an LDL^T decomposition over Q scaled to integers, so
the kernel only ever compares integers.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gamma, lcm, pi, sqrt

from . import _fpenum_py
from .errors import NotPositiveDefinite
from .linalg import Matrix, integer_kernel, rational_inverse, smith_normal_form

try:
    if os.environ.get("QUADTMF_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _fpenum as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_I64_SAFE = 2 ** 62
_DENSE_HIST_LIMIT = 5_000_000


def kernel(name=None):
    """The kernel module for ``name`` ('cython', 'python' or None for default)."""
    if name is None:
        name = BACKEND
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel is not available")
        return _compiled
    return _fpenum_py


def ldl(gram):
    """(d, u) with b(y, y) = sum_k d_k (y_k + sum_{j>k} u_kj y_j)^2."""
    n = gram.rows
    a = [[Fraction(x) for x in r] for r in gram.tolist()]
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        p = a[k][k]
        if p <= 0:
            raise NotPositiveDefinite("form is not positive definite")
        d[k] = p
        for j in range(k + 1, n):
            u[k][j] = a[k][j] / p
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return d, u


@dataclass(frozen=True)
class Plan:
    """Integer data handed to a kernel, plus how to undo the scaling."""

    w: tuple
    su: tuple
    e: tuple
    S: int
    M: int          # scaled norm = M * b(y, y)
    budget: int
    fits_int64: bool
    step: int = 1     # every scaled norm is offset + step * k
    offset: int = 0


def make_plan(gram, bound, shift=None):
    """Plan enumerating y = x + shift, x integral, with b(y, y) <= bound."""
    n = gram.rows
    d, u = ldl(gram)
    c = [Fraction(0)] * n if shift is None else [Fraction(x) for x in shift]
    ep = [c[k] + sum((u[k][j] * c[j] for j in range(k + 1, n)), Fraction(0)) for k in range(n)]
    S = 1
    for k in range(n):
        S = lcm(S, ep[k].denominator)
        for j in range(k + 1, n):
            S = lcm(S, u[k][j].denominator)
    M = 1
    for k in range(n):
        M = lcm(M, (d[k] / (S * S)).denominator)
    w = tuple(int(d[k] * M / (S * S)) for k in range(n))
    su = tuple(tuple(int(S * u[k][j]) if j > k else 0 for j in range(n)) for k in range(n))
    e = tuple(int(S * ep[k]) for k in range(n))
    bound = Fraction(bound)
    budget = (bound * M).numerator // (bound * M).denominator
    fits = _fits(gram, bound, c, su, e, S, M * bound)
    # b(c + x, c + x) lies in b(c, c) + (1/D) Z, D the denominator of 2 G c
    gc = gram.apply(c) if n else []
    D = lcm(1, *(Fraction(2 * v).denominator for v in gc))
    base = sum((ci * v for ci, v in zip(c, gc)), Fraction(0)) * M
    step = Fraction(M, D)
    if step.denominator == 1 and base.denominator == 1:
        step, offset = int(step), int(base) % int(step)
    else:
        step, offset = 1, 0
    return Plan(w, su, e, S, M, max(budget, -1), fits, step, offset)


def _fits(gram, bound, c, su, e, S, scaled):
    """Can every intermediate of the kernel loop stay below 2^62?"""
    n = gram.rows
    if n == 0:
        return True
    if scaled >= _I64_SAFE:
        return False
    inv = rational_inverse(gram)
    # |y_j| <= sqrt(bound * inv_jj) on the ellipsoid
    xb = [int(sqrt(float(max(bound, 0) * inv[j, j]))) + 2 + abs(int(c[j])) for j in range(n)]
    for k in range(n):
        s = abs(e[k]) + S * xb[k] + sum(abs(su[k][j]) * xb[j] for j in range(k + 1, n))
        if s * s >= _I64_SAFE:
            return False
    return True


def _run(plan, what, backend=None):
    if plan.budget < 0:
        return {} if what == "histogram" else []
    mod = kernel(backend)
    if mod is not _fpenum_py and not plan.fits_int64:
        mod = _fpenum_py
    args = (list(plan.w), [list(r) for r in plan.su], list(plan.e), plan.S, plan.budget)
    if what == "histogram":
        if plan.budget < plan.offset:
            return {}
        if (plan.budget - plan.offset) // plan.step > _DENSE_HIST_LIMIT:
            mod = _fpenum_py
        return mod.histogram(*args, step=plan.step, offset=plan.offset)
    return getattr(mod, what)(*args)


def norm_histogram(gram, bound, shift=None, backend=None):
    """Map b(y, y) (a Fraction) -> number of y in shift + Z^n with b(y, y) <= bound."""
    plan = make_plan(gram, bound, shift)
    hist = _run(plan, "histogram", backend)
    return {Fraction(v, plan.M): c for v, c in hist.items()}


def short_vectors(gram, bound, backend=None):
    """All integer vectors v with b(v, v) <= bound, as (coords, norm) pairs."""
    plan = make_plan(gram, bound)
    out = _run(plan, "vectors", backend)
    return [(x, Fraction(v, plan.M)) for x, v in out]


def short_vector_array(gram, bound):
    """Numpy (coords, norms) for b(v, v) <= bound; norms are exact integers."""
    import numpy as np
    plan = make_plan(gram, bound)
    n = gram.rows
    if plan.budget < 0:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
    if _compiled is not None and plan.fits_int64:
        coords, norms = _compiled.vector_array(list(plan.w), [list(r) for r in plan.su],
                                               list(plan.e), plan.S, plan.budget)
        coords = coords.astype(np.int64)
    else:
        pairs = _run(plan, "vectors", "python")
        coords = np.array([x for x, _ in pairs], dtype=np.int64).reshape(len(pairs), n)
        norms = np.array([v for _, v in pairs], dtype=np.int64)
    # integral Gram matrix and no shift: scaled norms are multiples of M
    return coords, norms // plan.M


# theta coefficient counts

def _ball_count(k, radius2, det):
    """Rough count of points of a rank-k lattice of determinant det in a ball."""
    if k == 0:
        return 1.0
    return pi ** (k / 2) / gamma(k / 2 + 1) * radius2 ** (k / 2) / sqrt(float(det)) + 1.0


def _split_data(gram, k):
    n = gram.rows
    top = gram.submatrix(range(k), range(n))
    K = integer_kernel(top)
    cols = [[int(i == j) for i in range(n)] for j in range(k)] + [K.col(j) for j in range(K.cols)]
    P = Matrix.from_columns(cols, n)
    return P, K


def _plan_split(gram, bound):
    """Best (cost, order, k) over block splits, or None if direct is better."""
    n = gram.rows
    det = gram.det()
    best = (_ball_count(n, bound, det), None, None)
    for order in (list(range(n)), list(range(n))[::-1]):
        g = gram.submatrix(order, order)
        for k in range(1, n):
            P, K = _split_data(g, k)
            index = abs(P.det())
            g1 = g.submatrix(range(k), range(k))
            g2 = K.T @ g @ K
            d1, d2 = g1.det(), g2.det()
            cost = (min(index, d1) * _ball_count(k, bound, d1)
                    + min(index, d2) * _ball_count(n - k, bound, d2)
                    + index * (2 * bound + 1) ** 2)
            if cost < best[0]:
                best = (cost, order, k)
    return None if best[1] is None else best


def theta_counts(gram, N, method="auto", backend=None):
    """[#{v : b(v, v) = 2n} for n < N] for an even positive definite form."""
    if N <= 0:
        return []
    bound = 2 * (N - 1)
    split = None
    if method == "auto" and gram.rows > 1:
        split = _plan_split(gram, bound)
    elif method == "split" and gram.rows > 1:
        split = _plan_split(gram, bound) or (0, list(range(gram.rows)), gram.rows // 2)
    if split is None:
        hist = norm_histogram(gram, bound, backend=backend)
        return [hist.get(Fraction(2 * m), 0) for m in range(N)]
    _, order, k = split
    return _theta_split(gram.submatrix(order, order), k, bound, N, backend)


def _theta_split(gram, k, bound, N, backend):
    n = gram.rows
    P, K = _split_data(gram, k)
    g1 = gram.submatrix(range(k), range(k))
    g2 = K.T @ gram @ K
    Pinv = rational_inverse(P)
    d, u, _ = smith_normal_form(P)
    uinv = rational_inverse(u)
    h1, h2 = {}, {}
    out = [0] * N
    ranges = [range(d[i, i]) for i in range(n)]

    def reps(i=0, acc=()):
        if i == n:
            yield acc
            return
        for a in ranges[i]:
            yield from reps(i + 1, acc + (a,))

    for a in reps():
        r = uinv.apply(a)
        y = Pinv.apply(r)
        c1 = tuple(x - (x.numerator // x.denominator) for x in y[:k])
        c2 = tuple(x - (x.numerator // x.denominator) for x in y[k:])
        if c1 not in h1:
            h1[c1] = norm_histogram(g1, bound, c1, backend)
        if c2 not in h2:
            h2[c2] = norm_histogram(g2, bound, c2, backend)
        for v1, n1 in h1[c1].items():
            for v2, n2 in h2[c2].items():
                tot = v1 + v2
                if tot <= bound:
                    m = tot / 2
                    out[int(m)] += n1 * n2
    return out
