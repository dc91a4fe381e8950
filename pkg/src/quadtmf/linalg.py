"""Exact integer and rational matrices.

All arithmetic uses Python ints and :class:`fractions.Fraction`, so nothing
overflows and nothing is rounded.  Matrices are immutable; every operation
returns a new one.
"""

from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import DimensionMismatch, InputError, SingularMatrix


class Matrix:
    """Immutable dense matrix over Z or Q.

    ``entries`` is a sequence of rows.  A matrix with no columns still keeps
    its row count, so pass ``shape`` when building one from an empty list.
    """

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries, shape=None):
        e = tuple(tuple(_coerce(x) for x in row) for row in entries)
        if shape is None:
            rows = len(e)
            cols = len(e[0]) if rows else 0
        else:
            rows, cols = shape
            if not e and rows:
                e = tuple(() for _ in range(rows))
        if len(e) != rows or any(len(r) != cols for r in e):
            raise DimensionMismatch("ragged or mis-shaped matrix entries")
        self.rows = rows
        self.cols = cols
        self._e = e

    # construction helpers

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], (n, n))

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], (rows, cols))

    @classmethod
    def diag(cls, values):
        values = list(values)
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], (n, n))

    @classmethod
    def from_columns(cls, columns, nrows):
        columns = [list(c) for c in columns]
        return cls([[c[i] for c in columns] for i in range(nrows)], (nrows, len(columns)))

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
            raise InputError("matrix must be a JSON array of arrays")
        return cls([[_parse_scalar(x) for x in row] for row in data])

    # access

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i):
        return self._e[i]

    def col(self, j):
        return tuple(r[j] for r in self._e)

    def tolist(self):
        return [list(r) for r in self._e]

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def T(self):
        return Matrix([[self._e[i][j] for i in range(self.rows)] for j in range(self.cols)],
                      (self.cols, self.rows))

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        return Matrix([[self._e[i][j] for j in cols] for i in rows], (len(rows), len(cols)))

    def columns(self, idx):
        return self.submatrix(range(self.rows), idx)

    def diagonal(self):
        return tuple(self._e[i][i] for i in range(min(self.rows, self.cols)))

    # arithmetic

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        oc = other.T._e
        return Matrix([[sum(a * b for a, b in zip(r, c)) for c in oc] for r in self._e],
                      (self.rows, other.cols))

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], self.shape)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self._e], self.shape)

    def scale(self, k):
        return Matrix([[k * a for a in r] for r in self._e], self.shape)

    def apply(self, vec):
        """Matrix times a plain vector, returned as a tuple."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._e)

    # predicates

    def is_square(self):
        return self.rows == self.cols

    def is_symmetric(self):
        return self.is_square() and all(
            self._e[i][j] == self._e[j][i] for i in range(self.rows) for j in range(i))

    def is_integral(self):
        return all(isinstance(x, int) or x.denominator == 1 for r in self._e for x in r)

    def is_zero(self):
        return all(x == 0 for r in self._e for x in r)

    def det(self):
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        return bareiss_det(self)

    # dunder plumbing

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self):
        return hash((self.shape, self._e))

    def __repr__(self):
        if self.cols == 0:
            return f"Matrix([], shape={self.shape})"
        return f"Matrix({self.tolist()!r})"

    def to_json(self):
        return [[_format_scalar(x) for x in r] for r in self._e]


IntMatrix = Matrix
RatMatrix = Matrix


def _coerce(x):
    if isinstance(x, bool):
        raise InputError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if hasattr(x, "__index__"):
        return int(x)
    raise InputError(f"unsupported matrix entry {x!r}")


def _parse_scalar(x):
    if isinstance(x, bool):
        raise InputError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return _coerce(Fraction(x.strip()))
        except ValueError:
            raise InputError(f"bad matrix entry {x!r}") from None
    raise InputError(f"bad matrix entry {x!r}")


def _format_scalar(x):
    return str(x)


def bareiss_det(m):
    n = m.rows
    if n == 0:
        return 1
    a = m.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            a[i][k] = 0
        prev = a[k][k]
    return _coerce(sign * a[n - 1][n - 1])


def smith_normal_form(m):
    """Return ``(d, u, v)`` with ``d == u @ m @ v``.

    ``u`` and ``v`` are unimodular and ``d`` is diagonal with nonnegative
    entries, each dividing the next.  Pivots are chosen by smallest nonzero
    absolute value.
    """
    if not m.is_integral():
        raise InputError("smith_normal_form needs an integer matrix")
    r, c = m.shape
    a = m.tolist()
    u = Matrix.identity(r).tolist()
    v = Matrix.identity(c).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ad, as_ = a[dst], a[src]
        for k in range(c):
            ad[k] += q * as_[k]
        ud, us = u[dst], u[src]
        for k in range(r):
            ud[k] += q * us[k]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(r, c)):
        # bring the smallest nonzero entry of the trailing block to (t, t)
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                # a smaller remainder exists in row or column t; pivot on it
                best = (abs(p), t, t)
                for i in range(t + 1, r):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, c):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return Matrix(a, (r, c)), Matrix(u, (r, r)), Matrix(v, (c, c))


def rank(m):
    d, _, _ = smith_normal_form(m)
    return sum(1 for x in d.diagonal() if x)


def hermite_rows(rows, ncols):
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows: pivots positive and strictly increasing in
    column, entries above each pivot reduced into ``[0, pivot)``.
    """
    a = [list(r) for r in rows]
    out = []
    col = 0
    while a and col < ncols:
        nz = [r for r in a if r[col]]
        zero = [r for r in a if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (rest if r[col] else zero).append(r)
            nz = [piv] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        for k, prev in enumerate(out):
            q = prev[col] // piv[col]
            if q:
                out[k] = [x - q * y for x, y in zip(prev, piv)]
        out.append(piv)
        a = [r for r in zero if any(r)]
        col += 1
    return out


def saturated_kernel(m):
    """Kernel of ``m`` acting on column vectors, plus a complement.

    Returns ``(kernel, complement)``: matrices whose columns are bases, with
    ``[kernel | complement]`` unimodular.  The kernel basis is put in Hermite
    form and the complement uses standard basis vectors when that works.
    """
    n = m.cols
    kernel, v, rk = _kernel(m)
    if not kernel.cols:
        return kernel, Matrix.identity(n)
    ker_cols = [kernel.col(j) for j in range(kernel.cols)]
    pivots = [next(j for j, x in enumerate(r) if x) for r in ker_cols]
    free = [j for j in range(n) if j not in pivots]
    choices = [free]
    if comb(n, rk) <= 5000:
        choices += [list(c) for c in combinations(range(n), rk)]
    for idx in choices:
        cand = Matrix.from_columns(ker_cols + [_unit(n, j) for j in idx], n)
        if abs(cand.det()) == 1:
            return kernel, Matrix.from_columns([_unit(n, j) for j in idx], n)
    return kernel, Matrix.from_columns([v.col(j) for j in range(rk)], n)


def _kernel(m):
    n = m.cols
    d, _, v = smith_normal_form(m)
    rk = sum(1 for x in d.diagonal() if x)
    ker_cols = [v.col(j) for j in range(rk, n)]
    if not ker_cols:
        return Matrix.zeros(n, 0), v, rk
    return Matrix.from_columns(hermite_rows(ker_cols, n), n), v, rk


def integer_kernel(m):
    """Hermite-form basis (as columns) of the integer kernel of ``m``."""
    return _kernel(m)[0]


def _unit(n, j):
    return [int(i == j) for i in range(n)]


def rational_inverse(m):
    """Exact inverse over Q; raises :class:`SingularMatrix` when det is 0."""
    if not m.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m.tolist())]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix has determinant 0")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return Matrix([row[n:] for row in a], (n, n))


def solve_integral(a, b):
    """One integer solution of ``a @ x == b`` or None if there is none."""
    d, u, v = smith_normal_form(a)
    ub = u.apply(b)
    y = [0] * a.cols
    for i, val in enumerate(ub):
        di = d[i, i] if i < min(a.rows, a.cols) else 0
        if di == 0:
            if val != 0:
                return None
        else:
            if val % di:
                return None
            y[i] = val // di
    return v.apply(y)


def block_diag(a, b):
    n, m = a.rows, b.rows
    rows = [list(a.row(i)) + [0] * m for i in range(n)]
    rows += [[0] * n + list(b.row(i)) for i in range(m)]
    return Matrix(rows, (n + m, n + m))


def hstack(a, b):
    if a.rows != b.rows:
        raise DimensionMismatch("hstack needs equal row counts")
    return Matrix([list(a.row(i)) + list(b.row(i)) for i in range(a.rows)], (a.rows, a.cols + b.cols))
