"""Symbolic TMF-modules and graded maps between sums of shifted TMF.

Normal forms
------------
Every expressible module is a direct sum of terms ``L'(T)[s]`` where ``T``
is a torsion linking form and ``L'(T)`` is the module of any nondegenerate
form with discriminant ``T``, shifted back to signature zero::

    L_b = L'(disc b)[2 b- - 3 b+] (x) (TMF + TMF[-1])^(nullity b)

This is well defined because forms with the same discriminant become
congruent after adding <1> and <-1> summands, and each such summand only
shifts the module.  ``L'(0) = TMF`` and ``L'(<1/2>) = Cone(nu)[-2]``.  Two
terms are equal when their shifts agree and their torsion forms are
isomorphic, which is the same as the underlying forms being equivalent up
to stabilization.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .bilform import BilinearForm, radical_split
from .decision import Decision
from .discform import TorsionLinkingForm, discriminant, torsion_forms_isomorphic
from .errors import InputError, ShapeMismatch, UnknownName
from .tmfcoeff import default_table

HALF = TorsionLinkingForm.cyclic(2, Fraction(1, 2))


def _cone_power(t):
    """m if ``t`` is isomorphic to the sum of m copies of <1/2>, else None."""
    if t.is_trivial():
        return 0
    if any(o != 2 for o in t.invariant_factors):
        return None
    m = len(t.invariant_factors)
    diag = TorsionLinkingForm([2] * m, [[Fraction(1, 2) if i == j else 0 for j in range(m)]
                                        for i in range(m)])
    return m if torsion_forms_isomorphic(t, diag) is Decision.YES else None


@dataclass(frozen=True)
class Term:
    """The summand L'(torsion)[shift] of a normal form."""

    shift: int
    torsion: TorsionLinkingForm
    # optional presenting form, for annotations only
    form: BilinearForm = field(default=None, compare=False, repr=False)

    def key(self):
        return self.shift, self.torsion.fingerprint()

    def same(self, other):
        return (self.shift == other.shift
                and self.torsion.invariant_factors == other.torsion.invariant_factors
                and torsion_forms_isomorphic(self.torsion, other.torsion) is Decision.YES)

    def shifted(self, n):
        return Term(self.shift + n, self.torsion, self.form)

    def dual(self):
        form = None if self.form is None else -self.form
        return Term(-self.shift, self.torsion.negate(), form)

    def tensor(self, other):
        return Term(self.shift + other.shift, self.torsion.direct_sum(other.torsion))

    def display(self):
        """Atom description and displayed shift, e.g. ('Cone(nu)', -5)."""
        if self.torsion.is_trivial():
            return "TMF", self.shift
        m = _cone_power(self.torsion)
        if m:
            atom = "Cone(nu)" if m == 1 else "(x)".join(["Cone(nu)"] * m)
            return atom, self.shift - 2 * m
        return f"L'<{self.torsion.describe()}>", self.shift

    def __str__(self):
        atom, s = self.display()
        return atom if s == 0 else f"{atom}[{s}]"

    def to_json(self):
        atom, s = self.display()
        d = {"atom": atom, "shift": s}
        if not self.torsion.is_trivial():
            d["torsion"] = self.torsion.to_json()
            d["canonical_shift"] = self.shift
        return d

    @classmethod
    def from_json(cls, data):
        if data.get("atom") == "TMF" and "torsion" not in data:
            return cls(int(data["shift"]), TorsionLinkingForm.trivial())
        try:
            return cls(int(data["canonical_shift"]), TorsionLinkingForm.from_json(data["torsion"]))
        except KeyError as exc:
            raise InputError(f"bad normal-form term: missing {exc}") from None


class ModuleExpr:
    """Base class of symbolic module expressions.

    ``==`` compares normal forms, so differently written expressions of the
    same module are equal.
    """

    def normal_form(self):
        raise NotImplementedError

    def dual(self):
        raise NotImplementedError

    def shift(self, n):
        return Shifted(self, n)

    def __add__(self, other):
        return DirectSum(self, other)

    def __eq__(self, other):
        if not isinstance(other, ModuleExpr):
            return NotImplemented
        return self.normal_form()._matches(other.normal_form())

    def __hash__(self):
        return hash(self.normal_form()._hash_key())

    def __str__(self):
        return str(self.normal_form())


class _Atom(ModuleExpr):
    name = None

    def __repr__(self):
        return self.name

    def to_json(self):
        return {"atom": self.name, "shift": 0}


class TMFAtom(_Atom):
    name = "TMF"

    def normal_form(self):
        return NormalForm([Term(0, TorsionLinkingForm.trivial())])

    def dual(self):
        return self


class ConeNuAtom(_Atom):
    name = "ConeNu"

    def normal_form(self):
        return NormalForm([Term(2, HALF)])

    def dual(self):
        return Shifted(self, -4)


TMF = TMFAtom()
ConeNu = ConeNuAtom()


class OpaqueL(ModuleExpr):
    """The module attached to a bilinear form, kept unevaluated."""

    def __init__(self, form):
        self.form = form

    def normal_form(self):
        return from_bilinear(self.form)

    def dual(self):
        return Shifted(OpaqueL(-self.form), self.form.rank)

    def __repr__(self):
        return f"OpaqueL({self.form.gram.tolist()})"

    def to_json(self):
        return {"atom": "OpaqueL", "form": self.form.to_json()}


class Shifted(ModuleExpr):
    def __init__(self, inner, n):
        self.inner = inner
        self.n = int(n)

    def normal_form(self):
        return NormalForm([t.shifted(self.n) for t in self.inner.normal_form().terms])

    def dual(self):
        return Shifted(self.inner.dual(), -self.n)

    def __repr__(self):
        return f"{self.inner!r}[{self.n}]"

    def to_json(self):
        return {"shift": self.n, "of": self.inner.to_json()}


class DirectSum(ModuleExpr):
    def __init__(self, *parts):
        self.parts = tuple(parts)

    def normal_form(self):
        return NormalForm([t for p in self.parts for t in p.normal_form().terms])

    def dual(self):
        return DirectSum(*(p.dual() for p in self.parts))

    def __repr__(self):
        return "(" + " + ".join(repr(p) for p in self.parts) + ")"

    def to_json(self):
        return {"sum": [p.to_json() for p in self.parts]}


class Tensor(ModuleExpr):
    def __init__(self, *parts):
        self.parts = tuple(parts)

    def normal_form(self):
        terms = [Term(0, TorsionLinkingForm.trivial())]
        for p in self.parts:
            terms = [a.tensor(b) for a in terms for b in p.normal_form().terms]
        return NormalForm(terms)

    def dual(self):
        return Tensor(*(p.dual() for p in self.parts))

    def __repr__(self):
        return "(" + " (x) ".join(repr(p) for p in self.parts) + ")"

    def to_json(self):
        return {"tensor": [p.to_json() for p in self.parts]}


class NormalForm(ModuleExpr):
    """Canonical sum of terms, sorted by shift and then by invariants."""

    def __init__(self, terms):
        self.terms = tuple(sorted(terms, key=lambda t: (-t.shift, repr(t.torsion.fingerprint()))))

    def normal_form(self):
        return self

    def dual(self):
        return NormalForm([t.dual() for t in self.terms])

    @property
    def has_opaque(self):
        return any(t.display()[0].startswith("L'") for t in self.terms)

    def shifts(self):
        """Shifts of the summands when all of them are plain TMF, else None."""
        if any(not t.torsion.is_trivial() for t in self.terms):
            return None
        return tuple(t.shift for t in self.terms)

    def _hash_key(self):
        return tuple(sorted(Counter(repr(t.key()) for t in self.terms).items()))

    def _matches(self, other):
        if len(self.terms) != len(other.terms):
            return False
        pool = list(other.terms)
        for t in self.terms:
            for k, u in enumerate(pool):
                if t.same(u):
                    del pool[k]
                    break
            else:
                return False
        return True

    def __str__(self):
        if not self.terms:
            return "0"
        parts = [str(t) for t in self.terms]
        grouped = []
        for p in parts:
            if grouped and grouped[-1][0] == p:
                grouped[-1][1] += 1
            else:
                grouped.append([p, 1])
        return " + ".join(p if k == 1 else f"{k}*{p}" for p, k in grouped)

    def __repr__(self):
        return f"NormalForm({self})"

    def to_json(self):
        d = {"normal_form": [t.to_json() for t in self.terms], "text": str(self)}
        if self.has_opaque:
            d["equality"] = "up to stable equivalence of the presenting forms"
        return d


def expr_from_json(data):
    """Parse an expression or normal-form payload."""
    if not isinstance(data, dict):
        raise InputError("module expression must be a JSON object")
    if "normal_form" in data:
        return NormalForm([Term.from_json(t) for t in data["normal_form"]])
    if "sum" in data:
        return DirectSum(*(expr_from_json(p) for p in data["sum"]))
    if "tensor" in data:
        return Tensor(*(expr_from_json(p) for p in data["tensor"]))
    if "of" in data:
        return Shifted(expr_from_json(data["of"]), int(data.get("shift", 0)))
    atom = data.get("atom")
    n = int(data.get("shift", 0))
    if atom == "TMF":
        base = TMF
    elif atom == "ConeNu":
        base = ConeNu
    elif atom == "OpaqueL":
        base = OpaqueL(BilinearForm.from_json(data["form"]))
    else:
        raise InputError(f"unknown atom {atom!r}")
    return base if n == 0 else Shifted(base, n)


def from_bilinear(b):
    """Normal form of the module attached to ``b``."""
    k, core, _ = radical_split(b)
    sig = core.signature
    disc = discriminant(b)
    base = -(3 * sig.b_plus - 2 * sig.b_minus)
    torsion = disc.torsion_form
    form = core if not torsion.is_trivial() else None
    terms = []
    for i in range(k + 1):
        terms += [Term(base - i, torsion, form)] * comb(k, i)
    return NormalForm(terms)


def opaque_metadata(b):
    """Annotations for a form whose module is kept opaque.

    ``rank_after_inverting_6`` is recorded for one-dimensional forms (n)
    with n >= 1, where the module splits into n shifted copies of TMF once
    6 is inverted; it does not take part in equality.
    """
    sig = b.signature
    disc = discriminant(b)
    meta = {"rank": b.rank, "signature": sig.to_json(), "discriminant": disc.to_json()}
    if b.rank == 1 and b[0, 0] >= 1:
        meta["rank_after_inverting_6"] = b[0, 0]
    return meta


def dual(m):
    return m.dual()


def tensor(*parts):
    return Tensor(*parts)


def direct_sum(*parts):
    return DirectSum(*parts)


def tmf(shift=0):
    return TMF if shift == 0 else Shifted(TMF, shift)


def cone_nu(shift=0):
    return ConeNu if shift == 0 else Shifted(ConeNu, shift)


def sum_of_shifts(shifts):
    return NormalForm([Term(s, TorsionLinkingForm.trivial()) for s in shifts])


# graded maps

class TmfMap:
    """A map between sums of shifted TMF, as a matrix over pi_* TMF.

    ``source`` and ``target`` list the shifts of the summands.  A map of
    degree d sends M[d] to N; entry (i, j) maps TMF[s_j] to TMF[t_i] and so
    lies in pi_{s_j - t_i + d}.
    """

    def __init__(self, source, target, matrix, degree=0, table=None):
        self.source = tuple(int(s) for s in source)
        self.target = tuple(int(t) for t in target)
        self.degree = int(degree)
        self.table = table or default_table()
        if len(matrix) != len(self.target) or any(len(r) != len(self.source) for r in matrix):
            raise ShapeMismatch(f"matrix must be {len(self.target)}x{len(self.source)}")
        rows = []
        for i, r in enumerate(matrix):
            row = []
            for j, x in enumerate(r):
                want = self.entry_degree(i, j)
                if x is None or x == 0:
                    x = self.table.zero(want)
                elif x.is_zero():
                    x = self.table.zero(want)
                elif not x.is_known():
                    x = self.table.unknown(want, x.unknown)
                elif x.degree != want:
                    raise ShapeMismatch(f"entry ({i}, {j}) = {x} has degree {x.degree}, expected {want}")
                row.append(x)
            rows.append(tuple(row))
        self.matrix = tuple(rows)

    def entry_degree(self, i, j):
        return self.source[j] - self.target[i] + self.degree

    @classmethod
    def identity(cls, shifts, table=None):
        table = table or default_table()
        n = len(shifts)
        return cls(shifts, shifts, [[table.one() if i == j else None for j in range(n)]
                                    for i in range(n)], 0, table)

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, TmfMap):
            return NotImplemented
        return (self.source, self.target, self.degree, self.matrix) == \
               (other.source, other.target, other.degree, other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.degree, self.matrix))

    def dual(self):
        """The dual map: target and source negated, matrix transposed."""
        m = [[self.matrix[i][j] for i in range(len(self.target))] for j in range(len(self.source))]
        return TmfMap([-t for t in self.target], [-s for s in self.source], m, self.degree, self.table)

    def shift(self, n):
        return TmfMap([s + n for s in self.source], [t + n for t in self.target],
                      self.matrix, self.degree, self.table)

    def permute_target(self, order):
        """Reorder target summands so that the new i-th one is old ``order[i]``."""
        return TmfMap(self.source, [self.target[k] for k in order],
                      [self.matrix[k] for k in order], self.degree, self.table)

    def permute_source(self, order):
        return TmfMap([self.source[k] for k in order], self.target,
                      [[r[k] for k in order] for r in self.matrix], self.degree, self.table)

    def scalar(self):
        """The single entry of a 1x1 map."""
        if len(self.source) != 1 or len(self.target) != 1:
            raise ShapeMismatch("not a 1x1 map")
        return self.matrix[0][0]

    def __str__(self):
        rows = ["; ".join(str(x) for x in r) for r in self.matrix]
        return "(" + " | ".join(rows) + ")"

    def __repr__(self):
        return f"TmfMap({self.source} -> {self.target}, degree {self.degree}, {self})"

    def to_json(self):
        return {"source": list(self.source), "target": list(self.target), "degree": self.degree,
                "matrix": [[x.to_json() for x in r] for r in self.matrix], "text": str(self)}


def compose(f, g):
    """f after g."""
    if g.target != f.source:
        raise ShapeMismatch(f"cannot compose: target {g.target} != source {f.source}")
    table = f.table
    deg = f.degree + g.degree
    m = []
    for i in range(len(f.target)):
        row = []
        for j in range(len(g.source)):
            acc = table.zero(g.source[j] - f.target[i] + deg)
            for k in range(len(f.source)):
                acc = acc + table.mul(f.matrix[i][k], g.matrix[k][j])
            row.append(acc)
        m.append(row)
    return TmfMap(g.source, f.target, m, deg, table)


BUILTIN_MAPS = ("restriction_L0", "duality_L0", "transfer_L0")


def builtin_map(name, sign=1, table=None):
    """Named maps on the module of the zero form.

    ``restriction_L0`` is (1 eta) from TMF + TMF[1] to TMF.
    ``duality_L0`` is (0 s; s eta) from TMF + TMF[1] to TMF[1] + TMF.
    ``transfer_L0`` is the dual of restriction, shifted by 1 and with its
    target reordered, giving the column (eta; s) from TMF[1] to TMF + TMF[1].
    """
    table = table or default_table()
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    eta = table.gen("eta")
    u = table.unit(sign)
    if name == "restriction_L0":
        return TmfMap((0, 1), (0,), [[table.one(), eta]], 0, table)
    if name == "duality_L0":
        return TmfMap((0, 1), (1, 0), [[None, u], [u, eta]], 0, table)
    if name == "transfer_L0":
        t = builtin_map("restriction_L0", table=table).dual().shift(1).permute_target((1, 0))
        return TmfMap(t.source, t.target, [[t.matrix[0][0]], [t.matrix[1][0] * sign]], 0, table)
    raise UnknownName(f"unknown map {name!r}; known: {', '.join(BUILTIN_MAPS)}")


def s2xs2_composite(sign=1, table=None):
    """Restriction after (the reordered) duality after transfer."""
    res = builtin_map("restriction_L0", table=table)
    mid = builtin_map("duality_L0", sign, table).permute_target((1, 0))
    tr = builtin_map("transfer_L0", sign, table)
    return compose(compose(res, mid), tr)
