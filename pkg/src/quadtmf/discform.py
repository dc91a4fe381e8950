"""Discriminant groups and torsion linking forms.

For a nondegenerate Gram matrix C the discriminant group is Z^r / C Z^r,
with the linking form lambda([x], [y]) = x^T C^{-1} y mod 1.  Generators are
taken from the Smith normal form d = u C v: the class of column i of
``u^{-1}`` has order d_i, and equals C applied to column i of v over d_i.

The sign of lambda is a convention.  :func:`set_orientation` flips it
globally.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod

from .bilform import BilinearForm, radical_split
from .decision import Decision
from .errors import BudgetExceeded, InputError
from .linalg import Matrix, smith_normal_form

DEFAULT_BUDGET = 10 ** 4

_orientation = 1


def set_orientation(sign):
    """Set the global sign of all linking-form values (+1 or -1)."""
    global _orientation
    if sign not in (1, -1):
        raise InputError("orientation must be +1 or -1")
    _orientation = sign


def orientation():
    return _orientation


def _mod1(x):
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def _factorize(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _valuation(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class TorsionLinkingForm:
    """A finite abelian group sum Z/o_i with a symmetric Q/Z-valued pairing.

    ``orders`` lists the orders of the chosen cyclic generators (each >= 2,
    not necessarily a divisibility chain); ``gram`` holds lambda(g_i, g_j)
    reduced into [0, 1).
    """

    def __init__(self, orders, gram):
        orders = tuple(int(o) for o in orders)
        if any(o < 2 for o in orders):
            raise InputError("cyclic orders must be at least 2")
        k = len(orders)
        g = tuple(tuple(_mod1(x) for x in row) for row in gram)
        if len(g) != k or any(len(r) != k for r in g):
            raise InputError("linking matrix shape does not match the group")
        for i in range(k):
            for j in range(k):
                if g[i][j] != g[j][i]:
                    raise InputError("linking matrix must be symmetric")
                if (orders[i] * g[i][j]).denominator != 1:
                    raise InputError(f"order relation fails at ({i}, {j})")
        self.orders = orders
        self.gram = g

    @classmethod
    def trivial(cls):
        return cls((), ())

    @classmethod
    def cyclic(cls, n, value):
        return cls((n,), ((Fraction(value),),))

    @property
    def order(self):
        return prod(self.orders)

    @property
    def rank(self):
        return len(self.orders)

    def is_trivial(self):
        return not self.orders

    @property
    def invariant_factors(self):
        d, _, _ = smith_normal_form(Matrix.diag(self.orders))
        return tuple(x for x in d.diagonal() if x > 1)

    def value(self, x, y):
        s = sum(Fraction(a * b) * self.gram[i][j]
                for i, a in enumerate(x) if a for j, b in enumerate(y) if b)
        return _mod1(s)

    def elements(self):
        return product(*(range(o) for o in self.orders))

    def negate(self):
        return TorsionLinkingForm(self.orders, [[-x for x in r] for r in self.gram])

    def direct_sum(self, other):
        k, m = self.rank, other.rank
        rows = [list(r) + [0] * m for r in self.gram] + [[0] * k + list(r) for r in other.gram]
        return TorsionLinkingForm(self.orders + other.orders, rows)

    def primes(self):
        ps = set()
        for o in self.orders:
            ps.update(_factorize(o))
        return sorted(ps)

    def primary_part(self, p):
        """The p-primary summand, generated by (o_i / p^a_i) g_i."""
        idx, orders, scale = [], [], []
        for i, o in enumerate(self.orders):
            a = _valuation(o, p)
            if a:
                idx.append(i)
                orders.append(p ** a)
                scale.append(o // p ** a)
        gram = [[scale[r] * scale[s] * self.gram[i][j] for s, j in enumerate(idx)]
                for r, i in enumerate(idx)]
        return TorsionLinkingForm(orders, gram)

    def self_value_counts(self):
        """Multiset of lambda(x, x); an isomorphism invariant."""
        return Counter(self.value(x, x) for x in self.elements())

    def fingerprint(self):
        """Hashable isomorphism invariant used to bucket forms cheaply."""
        counts = self.self_value_counts() if self.order <= DEFAULT_BUDGET else Counter()
        return self.invariant_factors, tuple(sorted(counts.items()))

    def __eq__(self, other):
        if not isinstance(other, TorsionLinkingForm):
            return NotImplemented
        return self.orders == other.orders and self.gram == other.gram

    def __hash__(self):
        return hash((self.orders, self.gram))

    def __repr__(self):
        return f"TorsionLinkingForm({list(self.orders)}, {[[str(x) for x in r] for r in self.gram]})"

    def describe(self):
        if not self.orders:
            return "0"
        if self.rank == 1:
            return f"Z/{self.orders[0]}:{self.gram[0][0]}"
        return "+".join(f"Z/{o}" for o in self.orders) + ":" + repr([[str(x) for x in r] for r in self.gram])

    def to_json(self):
        return {"factors": list(self.orders), "lambda": [[str(x) for x in r] for r in self.gram]}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data["factors"], [[Fraction(x) for x in r] for r in data["lambda"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad torsion form payload: {exc}") from None


@dataclass(frozen=True)
class DiscriminantData:
    free_rank: int
    invariant_factors: tuple
    torsion_form: TorsionLinkingForm
    # presentation data, used to map dual vectors to generator coordinates
    core: BilinearForm = field(repr=False, compare=False, default=None)
    basis_change: Matrix = field(repr=False, compare=False, default=None)
    u: Matrix = field(repr=False, compare=False, default=None)
    torsion_index: tuple = field(repr=False, compare=False, default=())

    @property
    def order(self):
        return prod(self.invariant_factors)

    def coordinates(self, x):
        """Generator coordinates of the class of a dual vector x of the core."""
        ux = self.u.apply(x)
        return tuple(ux[i] % d for i, d in zip(self.torsion_index, self.invariant_factors))

    def to_json(self):
        d = self.torsion_form.to_json()
        return {"free_rank": self.free_rank, "factors": d["factors"], "lambda": d["lambda"]}


def discriminant(b, sign=None):
    """Free rank and torsion linking form of the cokernel of ``b``."""
    sign = _orientation if sign is None else sign
    k, core, basis = radical_split(b)
    C = core.gram
    d, u, v = smith_normal_form(C)
    idx = [i for i, x in enumerate(d.diagonal()) if x > 1]
    factors = tuple(d[i, i] for i in idx)
    cols = [v.col(i) for i in idx]
    Cc = [C.apply(c) for c in cols]
    gram = [[Fraction(sign * sum(a * b for a, b in zip(cols[i], Cc[j])), factors[i] * factors[j])
             for j in range(len(idx))] for i in range(len(idx))]
    form = TorsionLinkingForm(factors, gram)
    return DiscriminantData(k, factors, form, core, basis, u, tuple(idx))


def _subgroup_is_everything(images, orders):
    """Do the vectors ``images`` generate Z^m / diag(orders)?"""
    m = len(orders)
    if m == 0:
        return True
    cols = [list(y) for y in images] + [[o if i == j else 0 for i in range(m)]
                                        for j, o in enumerate(orders)]
    d, _, _ = smith_normal_form(Matrix.from_columns(cols, m))
    return all(x == 1 for x in d.diagonal())


def _primary_isomorphic(a, b):
    if a.self_value_counts() != b.self_value_counts():
        return False
    elems = list(b.elements())
    k = a.rank
    cands = []
    for i in range(k):
        oi = a.orders[i]
        target = a.gram[i][i]
        cands.append([y for y in elems
                      if all((oi * c) % o == 0 for c, o in zip(y, b.orders))
                      and b.value(y, y) == target])
    chosen = []

    def extend(i):
        if i == k:
            return _subgroup_is_everything(chosen, b.orders)
        for y in cands[i]:
            if all(b.value(y, chosen[j]) == a.gram[i][j] for j in range(i)):
                chosen.append(y)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    return extend(0)


def torsion_forms_isomorphic(t1, t2, budget=DEFAULT_BUDGET):
    """Exhaustive isomorphism test for torsion forms of order <= budget."""
    for t in (t1, t2):
        if t.order > budget:
            raise BudgetExceeded(f"torsion order {t.order} exceeds budget {budget}")
    if t1.invariant_factors != t2.invariant_factors:
        return Decision.NO
    for p in t1.primes():
        if not _primary_isomorphic(t1.primary_part(p), t2.primary_part(p)):
            return Decision.NO
    return Decision.YES


def pm_equivalent(b, c, budget=DEFAULT_BUDGET):
    """Are ``b`` and ``c`` equivalent after adding copies of <1> and <-1>?

    Decided by free rank and the torsion linking form.
    """
    db, dc = discriminant(b), discriminant(c)
    if db.free_rank != dc.free_rank:
        return Decision.NO
    try:
        return torsion_forms_isomorphic(db.torsion_form, dc.torsion_form, budget)
    except BudgetExceeded:
        return Decision.INCONCLUSIVE

