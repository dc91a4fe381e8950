"""Exact truncated Laurent series in q, lattice theta series and Delta powers.

A series knows its coefficients on the window ``[lowest, truncation)``;
everything at or above ``truncation`` is unknown.  Arithmetic keeps track of
how far results are valid, so nothing silently pads with zeros.
"""

from fractions import Fraction

from . import lattice
from .bilform import BilinearForm
from .errors import InputError, NonUnitLeading, NotEven, NotPositiveDefinite, PreconditionFailed


def _num(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class QSeries:
    """sum_{n in [lowest, truncation)} c_n q^n, exact rational coefficients."""

    def __init__(self, coeffs, lowest=0, truncation=None, weight=None, meta=None):
        coeffs = [_num(c) for c in coeffs]
        if truncation is None:
            truncation = lowest + len(coeffs)
        if lowest + len(coeffs) > truncation:
            coeffs = coeffs[: max(truncation - lowest, 0)]
        coeffs += [0] * (truncation - lowest - len(coeffs))
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        self.lowest = lowest + k if k < len(coeffs) else truncation
        self.coeffs = coeffs[k:]
        self.truncation = truncation
        self.weight = None if weight is None else Fraction(weight)
        self.meta = dict(meta or {})

    @classmethod
    def from_dict(cls, terms, truncation, weight=None):
        """Build from {exponent: coefficient}."""
        if not terms:
            return cls([], truncation, truncation, weight)
        lo = min(terms)
        return cls([terms.get(n, 0) for n in range(lo, truncation)], lo, truncation, weight)

    @classmethod
    def one(cls, truncation, weight=0):
        return cls([1], 0, truncation, weight)

    @property
    def valuation(self):
        """Lowest exponent with a nonzero coefficient (truncation if none)."""
        return self.lowest

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, n):
        if n >= self.truncation:
            raise IndexError(f"coefficient of q^{n} is beyond the truncation q^{self.truncation}")
        if n < self.lowest:
            return 0
        return self.coeffs[n - self.lowest]

    def items(self):
        return [(self.lowest + i, c) for i, c in enumerate(self.coeffs) if c]

    def is_integral(self):
        return all(Fraction(c).denominator == 1 for c in self.coeffs)

    def _w(self, other, op):
        if self.weight is None or other.weight is None:
            return None
        return op(self.weight, other.weight)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries([other], 0, self.truncation, self.weight)
        N = min(self.truncation, other.truncation)
        lo = min(self.lowest, other.lowest, N)
        coeffs = [self[n] + other[n] if n < N else 0 for n in range(lo, N)]
        w = self.weight if self.weight == other.weight else None
        return QSeries(coeffs, lo, N, w)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.lowest, self.truncation, self.weight)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return QSeries([c * x for x in self.coeffs], self.lowest, self.truncation, self.weight)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        N = min(self.truncation + other.lowest, other.truncation + self.lowest)
        lo = self.lowest + other.lowest
        if N <= lo:
            return QSeries([], N, N, self._w(other, Fraction.__add__))
        out = [0] * (N - lo)
        a, b = self.coeffs, other.coeffs
        for i, x in enumerate(a):
            if not x:
                continue
            if i >= len(out):
                break
            for j in range(min(len(b), len(out) - i)):
                out[i + j] += x * b[j]
        return QSeries(out, lo, N, self._w(other, Fraction.__add__))

    __rmul__ = scale

    def invert_unit(self):
        """Multiplicative inverse; needs a nonzero leading coefficient."""
        if self.is_zero():
            raise NonUnitLeading("series has no known nonzero coefficient to invert")
        v, a = self.lowest, self.coeffs
        length = self.truncation - v
        lead = Fraction(a[0])
        inv = [Fraction(0)] * length
        inv[0] = 1 / lead
        for n in range(1, length):
            s = sum((a[k] * inv[n - k] for k in range(1, min(n, len(a) - 1) + 1)), Fraction(0))
            inv[n] = -s / lead
        w = None if self.weight is None else -self.weight
        return QSeries(inv, -v, -v + length, w)

    def __pow__(self, k):
        if k < 0:
            return self.invert_unit() ** (-k)
        result = QSeries.one(self.truncation - self.lowest, 0)
        if self.weight is None:
            result.weight = None
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k):
        """Multiply by q^k."""
        return QSeries(self.coeffs, self.lowest + k, self.truncation + k, self.weight, self.meta)

    def truncate(self, N):
        if N > self.truncation:
            raise InputError(f"cannot extend a series known below q^{self.truncation} to q^{N}")
        return QSeries(self.coeffs, self.lowest, N, self.weight, self.meta)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.lowest, self.coeffs, self.truncation) == (other.lowest, other.coeffs, other.truncation)

    def agrees_with(self, other, N=None):
        """Same coefficients below min truncation (or below N)."""
        top = min(self.truncation, other.truncation)
        if N is not None:
            top = min(top, N)
        lo = min(self.lowest, other.lowest)
        return all(self[n] == other[n] for n in range(lo, top))

    def __repr__(self):
        return f"QSeries({self})"

    def __str__(self):
        parts = []
        for n, c in self.items()[:8]:
            mono = "1" if n == 0 else ("q" if n == 1 else f"q^{n}")
            if n == 0:
                parts.append(_fmt(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{_fmt(c)}*{mono}")
        body = " + ".join(parts).replace("+ -", "- ") or "0"
        return f"{body} + O(q^{self.truncation})"

    def to_json(self):
        d = {
            "lowest": self.lowest,
            "coeffs": [_fmt(c) for c in self.coeffs],
            "truncation": self.truncation,
        }
        if self.weight is not None:
            d["weight"] = _fmt(self.weight)
        d["conjectural"] = bool(self.meta.get("conjectural", False))
        for k, v in self.meta.items():
            if k != "conjectural":
                d[k] = v
        return d

    @classmethod
    def from_json(cls, data):
        w = data.get("weight")
        meta = {k: v for k, v in data.items() if k not in ("lowest", "coeffs", "truncation", "weight")}
        return cls([Fraction(c) for c in data["coeffs"]], data["lowest"],
                   data.get("truncation"), None if w is None else Fraction(w), meta)


class ThetaSeries(QSeries):
    """Theta series of an even positive definite lattice."""

    def __init__(self, counts, label=None, rank=0):
        super().__init__(counts, 0, len(counts), Fraction(rank, 2))
        self.label = label
        self.rank = rank

    def to_json(self):
        d = super().to_json()
        d["label"] = self.label
        d["rank"] = self.rank
        return d


def sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def delta_series(N):
    """q prod (1 - q^n)^24, known below q^N."""
    if N < 2:
        raise InputError("delta_series needs N >= 2")
    # prod (1 - q^n) below q^(N-1) via Euler's pentagonal numbers
    M = N - 1
    eta = [0] * M
    k = 0
    while True:
        hit = False
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g < M:
                eta[g] = (-1) ** (k % 2)
                hit = True
        if not hit:
            break
        k += 1
    p = QSeries(eta, 0, M) ** 24
    d = p.shift(1)
    d.weight = Fraction(12)
    return d


def e4_series(N):
    """1 + 240 sum sigma_3(n) q^n; a reference series for E8 checks."""
    return QSeries([1] + [240 * sigma(3, n) for n in range(1, N)], 0, N, 4)


def _check_theta_input(b):
    if not b.is_even:
        raise NotEven("theta series needs an even form")
    if not b.is_positive_definite:
        raise NotPositiveDefinite("theta series needs a positive definite form")


def theta_series(b, N, method="auto"):
    """sum over v in Z^d of q^(b(v,v)/2), coefficients for exponents below N."""
    if not isinstance(b, BilinearForm):
        b = BilinearForm(b)
    _check_theta_input(b)
    if b.rank == 0:
        return ThetaSeries([1] + [0] * (N - 1) if N > 0 else [], b.label, 0)
    return ThetaSeries(lattice.theta_counts(b.gram, N, method), b.label, b.rank)


def edge_image(b, N, method="auto"):
    """Delta^(-d/8) * Theta_b known below q^N, tagged weight -d and conjectural."""
    if not isinstance(b, BilinearForm):
        b = BilinearForm(b)
    if not b.is_even:
        raise PreconditionFailed("form must be even")
    if not b.is_positive_definite:
        raise PreconditionFailed("form must be positive definite")
    if not b.is_unimodular:
        raise PreconditionFailed("form must be unimodular")
    d = b.rank
    if d % 8:
        raise PreconditionFailed("rank must be divisible by 8")
    k = d // 8
    theta = theta_series(b, N + k, method)
    dinv = delta_series(N + 2 * k + 1) ** (-k)
    out = (dinv * theta).truncate(N)
    expected = Fraction(d, 2) - 12 * k
    if out.weight != expected or expected != -d:
        raise AssertionError(f"weight bookkeeping failed: {out.weight} vs {-d}")
    out.meta = {"conjectural": True, "sign": "±", "label": b.label,
                "pole_order": -out.lowest}
    return out
