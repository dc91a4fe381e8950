"""Pure-Python enumeration kernel.

Same contract as the compiled ``_fpenum`` module.  The caller supplies an
integer-scaled LDL^T decomposition: for a coordinate vector x the scaled
norm is ``sum_k w[k] * t_k**2`` with ``t_k = S*x[k] + su[k] . x[k+1:] + e[k]``.
Only vectors whose scaled norm is at most ``budget`` are visited, from the
last coordinate to the first.
"""

from math import isqrt


def _walk(w, su, e, S, budget, visit):
    n = len(w)
    if n == 0:
        visit(0, ())
        return
    x = [0] * n
    hi = [0] * n
    rem = [0] * (n + 1)
    rem[n] = budget

    def start(k):
        s = e[k]
        row = su[k]
        for j in range(k + 1, n):
            s += row[j] * x[j]
        r = isqrt(rem[k + 1] // w[k])
        lo = -((r + s) // S)          # ceil((-r - s) / S)
        hi[k] = (r - s) // S
        x[k] = lo
        return s

    s_cache = [0] * n
    k = n - 1
    s_cache[k] = start(k)
    while True:
        if x[k] > hi[k]:
            k += 1
            if k == n:
                return
            x[k] += 1
            continue
        t = S * x[k] + s_cache[k]
        rem[k] = rem[k + 1] - w[k] * t * t
        if k == 0:
            visit(budget - rem[0], x)
            x[0] += 1
            continue
        k -= 1
        s_cache[k] = start(k)


def histogram(w, su, e, S, budget, step=1, offset=0):
    """Map scaled norm -> number of vectors with that norm.

    ``step`` and ``offset`` only size the dense table of the compiled twin.
    """
    counts = {}

    def visit(val, _x):
        counts[val] = counts.get(val, 0) + 1

    _walk(w, su, e, S, budget, visit)
    return counts


def vectors(w, su, e, S, budget):
    """All visited coordinate vectors with their scaled norms."""
    out = []

    def visit(val, x):
        out.append((tuple(x), val))

    _walk(w, su, e, S, budget, visit)
    return out
