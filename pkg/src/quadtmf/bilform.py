"""Integral symmetric bilinear forms.

A form is stored as its Gram matrix.  Invariants (signature, parity,
determinant) are computed exactly over Q and cached on first use.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from importlib import resources
from itertools import product

from .decision import Decision
from .errors import (DimensionMismatch, InputError, NonEvenDiagonal, NotSymmetric,
                     NotUnimodular, UnknownName, ValidationError)
from .linalg import Matrix, block_diag, hstack, saturated_kernel


@dataclass(frozen=True)
class SignatureRecord:
    b_plus: int
    b_minus: int
    b_zero: int
    parity: str
    det: int
    unimodular: bool

    @property
    def even(self):
        return self.parity == "even"

    def to_json(self):
        return {"b_plus": self.b_plus, "b_minus": self.b_minus, "b_zero": self.b_zero,
                "parity": self.parity, "det": str(self.det), "unimodular": self.unimodular}


class BilinearForm:
    """Symmetric bilinear form on Z^n given by an integer Gram matrix."""

    def __init__(self, gram, label=None):
        if not isinstance(gram, Matrix):
            gram = Matrix(gram, (0, 0)) if len(gram) == 0 else Matrix(gram)
        if not gram.is_square():
            raise DimensionMismatch(f"Gram matrix must be square, got {gram.shape}")
        if not gram.is_integral():
            raise InputError("Gram matrix entries must be integers")
        if not gram.is_symmetric():
            raise NotSymmetric("Gram matrix must be symmetric")
        self.gram = gram
        self.label = label

    @classmethod
    def diag(cls, values, label=None):
        return cls(Matrix.diag(values), label)

    @classmethod
    def empty(cls):
        return cls(Matrix.zeros(0, 0))

    @property
    def rank(self):
        return self.gram.rows

    def __getitem__(self, ij):
        return self.gram[ij]

    def value(self, x, y):
        return sum(xi * gy for xi, gy in zip(x, self.gram.apply(y)))

    @cached_property
    def det(self):
        return self.gram.det()

    @cached_property
    def signature(self):
        return signature(self)

    @property
    def is_even(self):
        return all(x % 2 == 0 for x in self.gram.diagonal())

    @property
    def is_unimodular(self):
        return abs(self.det) == 1

    @property
    def is_positive_definite(self):
        return self.signature.b_plus == self.rank

    def __neg__(self):
        label = None if self.label is None else f"-{self.label}"
        return BilinearForm(-self.gram, label)

    def __eq__(self, other):
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        lab = f", label={self.label!r}" if self.label else ""
        return f"BilinearForm({self.gram.tolist()!r}{lab})"

    def to_json(self):
        d = {"gram": self.gram.to_json()}
        if self.label is not None:
            d["label"] = self.label
        return d

    @classmethod
    def from_json(cls, data):
        if isinstance(data, list):
            data = {"gram": data}
        if not isinstance(data, dict) or "gram" not in data:
            raise InputError("form object needs a 'gram' field")
        rows = data["gram"]
        gram = Matrix.zeros(0, 0) if rows == [] else Matrix.from_json(rows)
        return cls(gram, data.get("label"))


def _inertia(gram):
    """Counts (positive, negative, zero) by symmetric Gauss reduction over Q."""
    n = gram.rows
    a = [[Fraction(x) for x in r] for r in gram.tolist()]
    active = list(range(n))
    pos = neg = 0
    while active:
        k = next((i for i in active if a[i][i] != 0), None)
        if k is not None:
            p = a[k][k]
            if p > 0:
                pos += 1
            else:
                neg += 1
            active.remove(k)
            col = {i: a[i][k] for i in active}
            for i in active:
                if col[i]:
                    f = col[i] / p
                    ri = a[i]
                    for j in active:
                        ri[j] -= f * col[j]
            continue
        pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
        if pair is None:
            break
        # zero diagonal, nonzero off-diagonal: a hyperbolic 2x2 block
        i, j = pair
        c = a[i][j]
        pos += 1
        neg += 1
        active.remove(i)
        active.remove(j)
        ci = {r: a[r][i] for r in active}
        cj = {r: a[r][j] for r in active}
        for r in active:
            for s in active:
                a[r][s] -= (ci[r] * cj[s] + cj[r] * ci[s]) / c
    return pos, neg, len(active)


def signature(b):
    pos, neg, zero = _inertia(b.gram)
    det = b.det
    parity = "even" if b.is_even else "odd"
    return SignatureRecord(pos, neg, zero, parity, det, abs(det) == 1)


def pullback(a, b):
    """The form ``a^T B a`` on the source lattice of ``a``."""
    if not isinstance(a, Matrix):
        a = Matrix(a)
    if a.rows != b.rank:
        raise DimensionMismatch(f"pullback matrix has {a.rows} rows, form has rank {b.rank}")
    return BilinearForm(a.T @ b.gram @ a)


def direct_sum(*forms):
    out = Matrix.zeros(0, 0)
    for f in forms:
        out = block_diag(out, f.gram)
    return BilinearForm(out)


def stabilize(b, plus=0, minus=0):
    """``b`` plus ``plus`` copies of <1> and ``minus`` copies of <-1>."""
    return direct_sum(b, BilinearForm.diag([1] * plus + [-1] * minus))


def hyperbolic(k=1):
    return direct_sum(*[BilinearForm([[0, 1], [1, 0]]) for _ in range(k)])


@dataclass(frozen=True)
class QuadraticForm:
    """Integral quadratic polynomial sum_{i<=j} c_ij x_i x_j.

    ``coeffs`` is an upper-triangular square matrix; entries below the
    diagonal are ignored.
    """

    coeffs: Matrix

    @property
    def dim(self):
        return self.coeffs.rows

    def __call__(self, x):
        c = self.coeffs
        n = self.dim
        return sum(c[i, j] * x[i] * x[j] for i in range(n) for j in range(i, n))

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        n = self.dim
        return n == other.dim and all(self.coeffs[i, j] == other.coeffs[i, j]
                                      for i in range(n) for j in range(i, n))

    def __hash__(self):
        n = self.dim
        return hash(tuple(self.coeffs[i, j] for i in range(n) for j in range(i, n)))


def qform_convert(q):
    """Polarization b(v, w) = q(v + w) - q(v) - q(w)."""
    n = q.dim
    c = q.coeffs
    rows = [[2 * c[i, i] if i == j else c[min(i, j), max(i, j)] for j in range(n)]
            for i in range(n)]
    return BilinearForm(Matrix(rows, (n, n)))


def inverse_partial(b):
    """The quadratic form q(x) = b(x, x) / 2; needs an even diagonal."""
    n = b.rank
    odd = [i for i in range(n) if b[i, i] % 2]
    if odd:
        raise NonEvenDiagonal(f"diagonal entries {odd} are odd, so b(x,x)/2 is not integral")
    rows = [[b[i, i] // 2 if i == j else (b[i, j] if i < j else 0) for j in range(n)]
            for i in range(n)]
    return QuadraticForm(Matrix(rows, (n, n)))


def radical_split(b):
    """Split off the radical.

    Returns ``(k, core, basis_change)`` where ``basis_change`` is unimodular
    and pulls ``b`` back to the block sum of the k x k zero form and the
    nondegenerate ``core``.
    """
    kernel, complement = saturated_kernel(b.gram)
    k = kernel.cols
    if k == 0:
        return 0, b, Matrix.identity(b.rank)
    basis = hstack(kernel, complement)
    core = BilinearForm(complement.T @ b.gram @ complement)
    return k, core, basis


def unimodular_stable_form(b):
    """(b_plus, b_minus): the stable diagonal class of a unimodular form."""
    if not b.is_unimodular:
        raise NotUnimodular(f"det = {b.det}")
    s = b.signature
    return s.b_plus, s.b_minus


def _stabilizations(b, c, level):
    """Pairs (r, s, r2, s2) at stabilization ``level`` that could work.

    Only pairs that equalize rank, signature, nullity, determinant and
    parity are produced; all of these are congruence invariants.
    """
    sb, sc = b.signature, c.signature
    if sb.b_zero != sc.b_zero:
        return
    for r in range(level + 1):
        for s in range(level + 1 - r):
            r2 = sb.b_plus + r - sc.b_plus
            s2 = sb.b_minus + s - sc.b_minus
            if r2 < 0 or s2 < 0 or r2 + s2 > level:
                continue
            if max(r + s, r2 + s2) != level:
                continue
            if sb.det * (-1) ** s != sc.det * (-1) ** s2:
                continue
            even_b = sb.even and r + s == 0
            even_c = sc.even and r2 + s2 == 0
            if even_b != even_c:
                continue
            yield r, s, r2, s2


def _find_congruence(B, C, bound):
    """Search U with entries in [-bound, bound], U^T B U = C, det U = +-1."""
    n = B.rank
    norms = {}
    for v in product(range(-bound, bound + 1), repeat=n):
        if any(v):
            norms.setdefault(B.value(v, v), []).append(v)
    Bv = {}
    cols = []

    def extend(j):
        if j == n:
            return abs(Matrix.from_columns(cols, n).det()) == 1
        for v in norms.get(C[j, j], ()):
            w = Bv.get(v)
            if w is None:
                w = Bv[v] = B.gram.apply(v)
            if all(sum(x * y for x, y in zip(w, u)) == C[i, j] for i, u in enumerate(cols)):
                cols.append(v)
                if extend(j + 1):
                    return True
                cols.pop()
        return False

    if n == 0:
        return Matrix.zeros(0, 0)
    if extend(0):
        return Matrix.from_columns(cols, n)
    return None


def congruent_stably_bruteforce(b, c, stab_limit=1, coeff_bound=2, max_rank=6):
    """Brute-force search for a congruence after stabilizing by <+-1>.

    Stabilization levels are tried in increasing order, then coefficient
    bounds.  A hit is returned as ``Decision.YES``; running out of search
    space gives ``Decision.INCONCLUSIVE`` (never a proof of inequivalence).
    """
    for level in range(stab_limit + 1):
        for r, s, r2, s2 in _stabilizations(b, c, level):
            B = stabilize(b, r, s)
            C = stabilize(c, r2, s2)
            if B.rank > max_rank:
                continue
            if B.gram == C.gram:
                return Decision.YES
            for bound in range(1, coeff_bound + 1):
                if _find_congruence(B, C, bound) is not None:
                    return Decision.YES
    return Decision.INCONCLUSIVE


def find_congruence(b, c, coeff_bound=2):
    """A matrix U with U^T b U = c and bounded entries, or None."""
    if b.rank != c.rank:
        return None
    for bound in range(1, coeff_bound + 1):
        u = _find_congruence(b, c, bound)
        if u is not None:
            return u
    return None


# named forms

_CHECKS = ("even", "unimodular", "positive_definite")


def _validate_named(name, form, checks):
    problems = []
    for chk in checks:
        if chk not in _CHECKS:
            problems.append(f"{name}: unknown check {chk!r}")
        elif chk == "even" and not form.is_even:
            problems.append(f"{name}: not even")
        elif chk == "unimodular" and not form.is_unimodular:
            problems.append(f"{name}: det {form.det} is not +-1")
        elif chk == "positive_definite" and not form.is_positive_definite:
            problems.append(f"{name}: not positive definite")
    return problems


def load_named_forms(path=None):
    if path is None:
        text = resources.files("quadtmf").joinpath("data/forms.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    forms = {}
    problems = []
    for name, entry in data["forms"].items():
        form = BilinearForm(Matrix.from_json(entry["gram"]), label=name)
        problems += _validate_named(name, form, entry.get("checks", []))
        forms[name] = form
    if problems:
        raise ValidationError(problems)
    return forms


_NAMED = None


def named_form(name):
    """Builtin form by name (``E8``, ``D16+``, ``A1``, ``A2``, ``D4``, ``H``)."""
    global _NAMED
    if _NAMED is None:
        _NAMED = load_named_forms()
    try:
        return _NAMED[name]
    except KeyError:
        raise UnknownName(f"no builtin form {name!r}; known: {sorted(_NAMED)}") from None


def named_forms():
    named_form("E8")
    return dict(_NAMED)
