"""Manifold-level invariants built from intersection forms.

A 3-manifold enters as a framed link (surgery presentation of a bounding
2-handlebody W); its value is the module of the linking matrix shifted by
3 b+ - 2 b-.  A closed simply connected 4-manifold enters through its
unimodular intersection form and lands in pi_d TMF with d = 3 b+ - 2 b-.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice
from .bilform import BilinearForm, pullback
from .discform import discriminant
from .errors import InclusionNotIsometric, InputError, NotUnimodular, PreconditionFailed
from .kirby import FramedLink
from .linalg import Matrix, integer_kernel, rational_inverse, solve_integral
from .tmfcoeff import default_table
from .tmfmod import TmfMap, from_bilinear


@dataclass
class ThreeManifoldPresentation:
    link: FramedLink
    label: str = None

    @classmethod
    def s3(cls):
        return cls(FramedLink([]), "S^3")

    @classmethod
    def s2xs1(cls):
        return cls(FramedLink.unknot(0), "S^2 x S^1")

    @classmethod
    def lens(cls, n):
        """L(n, 1): the n-framed unknot."""
        return cls(FramedLink.unknot(n), f"L({n},1)")

    @classmethod
    def surface_times_circle(cls, g):
        """Sigma_g x S^1, presented by a (2g+1)-component link with zero linking matrix."""
        return cls(FramedLink.unlink([0] * (2 * g + 1)), f"Sigma_{g} x S^1")

    @classmethod
    def from_gram(cls, gram, label=None):
        return cls(FramedLink.from_gram(gram), label)

    def gram(self):
        return self.link.gram()

    def mirror(self):
        label = None if self.label is None else f"-({self.label})"
        return ThreeManifoldPresentation.from_gram(-self.gram().gram, label)

    def to_json(self):
        d = {"link": self.link.to_json()}
        if self.label:
            d["label"] = self.label
        return d

    @classmethod
    def from_json(cls, data):
        if "link" in data:
            return cls(FramedLink.from_json(data["link"]), data.get("label"))
        return cls(FramedLink.from_json(data), data.get("label"))


@dataclass
class FourManifoldClass:
    b: BilinearForm
    orientation: int = 1

    def __post_init__(self):
        if not self.b.is_unimodular:
            raise NotUnimodular(f"intersection form must be unimodular, det = {self.b.det}")
        if self.orientation not in (1, -1):
            raise InputError("orientation must be +1 or -1")

    def form(self):
        return self.b if self.orientation == 1 else -self.b


@dataclass
class CobordismData:
    """A 2-handle cobordism V0 -> V1 recorded through H2(V0) -> H2(V1).

    ``inclusion`` has one column per basis vector of H2(V0).
    """

    gram_V0: BilinearForm
    gram_V1: BilinearForm
    inclusion: Matrix

    def __post_init__(self):
        n0, n1 = self.gram_V0.rank, self.gram_V1.rank
        if self.inclusion.shape != (n1, n0):
            raise InclusionNotIsometric(f"inclusion must be {n1}x{n0}, got {self.inclusion.shape}")
        if pullback(self.inclusion, self.gram_V1).gram != self.gram_V0.gram:
            raise InclusionNotIsometric("inclusion does not pull the form on V1 back to the form on V0")

    @classmethod
    def from_json(cls, data):
        g0 = BilinearForm.from_json(data["V0"])
        g1 = BilinearForm.from_json(data["V1"])
        rows = data["inclusion"]
        inc = Matrix.zeros(g1.rank, g0.rank) if not rows or not rows[0] else Matrix.from_json(rows)
        return cls(g0, g1, inc)


# 3-manifolds

@dataclass
class Z3Result:
    module: object
    shift: int
    b1: int
    discriminant: object = field(repr=False)
    gram: BilinearForm = field(repr=False)

    def to_json(self):
        return {
            "module": self.module.normal_form().to_json(),
            "text": str(self.module.normal_form()),
            "shift": self.shift,
            "b1": self.b1,
            "discriminant": self.discriminant.to_json(),
        }


def _as_presentation(m):
    if isinstance(m, ThreeManifoldPresentation):
        return m
    if isinstance(m, FramedLink):
        return ThreeManifoldPresentation(m)
    if isinstance(m, BilinearForm):
        return ThreeManifoldPresentation.from_gram(m.gram)
    raise InputError("expected a presentation, framed link or bilinear form")


def z3(m):
    """The module of M: L_b[3 b+ - 2 b-] for the linking matrix b."""
    m = _as_presentation(m)
    b = m.gram()
    sig = b.signature
    shift = 3 * sig.b_plus - 2 * sig.b_minus
    disc = discriminant(b)
    return Z3Result(from_bilinear(b).shift(shift), shift, disc.free_rank, disc, b)


def orientation_reverse(m):
    """Module of the mirror, computed directly and as dual(Z(M))[-b1]."""
    m = _as_presentation(m)
    direct = z3(m.mirror()).module
    z = z3(m)
    via_dual = z.module.dual().shift(-z.b1)
    agree = direct == via_dual
    return direct.normal_form(), {
        "direct": str(direct),
        "via_dual": str(via_dual.normal_form()),
        "b1": z.b1,
        "agree": agree,
    }


# 4-manifolds

@dataclass
class Z4Result:
    degree: int
    element: object
    sign_ambiguous: bool
    conditional: bool = False
    note: str = ""

    def to_json(self):
        d = {
            "degree": self.degree,
            "element": str(self.element),
            "element_terms": self.element.to_json(),
            "unknown": not self.element.is_known(),
            "sign_ambiguous": self.sign_ambiguous,
            "conditional": self.conditional,
        }
        if self.note:
            d["note"] = self.note
        return d


def _norm_one_split(b):
    """(m, rest) with b = m<1> + rest and rest free of norm-1 vectors (b positive definite)."""
    units = [v for v, n in lattice.short_vectors(b.gram, 1) if n == 1]
    # vectors come in +- pairs and are pairwise orthogonal in a unimodular lattice
    reps = []
    for v in units:
        if tuple(-x for x in v) not in reps:
            reps.append(tuple(v))
    m = len(reps)
    if m == 0:
        return 0, b
    # orthogonal complement of the norm-1 vectors
    A = Matrix([list(b.gram.apply(list(v))) for v in reps])
    K = integer_kernel(A)
    return m, pullback(K, b)


def _has_vector_of_norm(b, n):
    return any(v == n for _, v in lattice.short_vectors(b.gram, n))


def z4(x, sign=1, table=None):
    """Degree and value of a closed simply connected 4-manifold.

    Known building blocks: <1> gives sign*nu, <-1> gives 0 and the
    hyperbolic plane gives eta (the last conditional on the undecided
    upside-down cobordism question).
    """
    if isinstance(x, FourManifoldClass):
        b = x.form()
    else:
        b = x if isinstance(x, BilinearForm) else BilinearForm(x)
        if not b.is_unimodular:
            raise NotUnimodular(f"intersection form must be unimodular, det = {b.det}")
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    table = table or default_table()
    sig = b.signature
    p, q = sig.b_plus, sig.b_minus
    deg = 3 * p - 2 * q
    conditional = False
    note = ""
    if b.rank == 0:
        el = table.one()
    elif not b.is_even:
        if p and q:
            el = table.zero(deg)
            note = "odd indefinite: splits off <-1>"
        elif q:
            if _has_vector_of_norm(-b, 1):
                el = table.zero(deg)
                note = "splits off <-1>"
            else:
                el = table.unknown(deg, "negative definite form without a <-1> summand")
        else:
            m, rest = _norm_one_split(b)
            nu = table.gen("nu") * sign
            el = table.one()
            for _ in range(m):
                el = table.mul(el, nu)
            if rest.rank:
                el = table.mul(el, table.unknown(3 * rest.rank, "definite summand without norm-1 vectors"))
            if el.degree != deg:
                raise AssertionError("degree bookkeeping failed")
    else:
        if p and q and p == q:
            el = table.one()
            eta = table.gen("eta")
            for _ in range(p):
                el = table.mul(el, eta)
            conditional = True
            note = "hyperbolic summands; assumes the upside-down cobordism question is answered positively"
        elif p and q:
            el = table.unknown(deg, "indefinite even form with an E8 summand")
            conditional = True
        else:
            el = table.unknown(deg, "even definite form")
    ambiguous = el.is_known() and not el.is_zero() and (-el) != el
    if not el.is_known():
        ambiguous = True
    return Z4Result(deg, el, ambiguous, conditional, note)


# cobordisms

def cobordism_degree(c):
    s0, s1 = c.gram_V0.signature, c.gram_V1.signature
    return 3 * (s1.b_plus - s0.b_plus) - 2 * (s1.b_minus - s0.b_minus)


def one_handle_map(table=None):
    """Experimental: TMF[-1] -> TMF + TMF[-1] as the second summand.

    Proposed value of a 1-handle attached to M x I (M = S^3); not a theorem,
    so the caller should carry the conjectural flag along.
    """
    table = table or default_table()
    return TmfMap((0,), (0, -1), [[None], [table.one()]], -1, table)


def cobordism_linking_check(c, samples=8, seed=0):
    """Compare linking forms across a cobordism through lifted classes.

    For x0 in Z^{n0} (a class of coker G0) pick x1 with i^T x1 = x0, set
    X = G1^-1 x1 - i G0^-1 x0 and likewise Y.  Then
    lam0(x0, y0) - lam1(x1, y1) + X^T G1 Y vanishes mod 1.
    """
    G0, G1, inc = c.gram_V0.gram, c.gram_V1.gram, c.inclusion
    if c.gram_V0.det == 0 or c.gram_V1.det == 0:
        raise PreconditionFailed("linking check needs nondegenerate forms on V0 and V1")
    n0 = G0.rows
    inv0, inv1 = rational_inverse(G0), rational_inverse(G1)
    rng = random.Random(seed)
    pool = [[int(i == j) for i in range(n0)] for j in range(n0)]
    while len(pool) < samples:
        pool.append([rng.randint(-3, 3) for _ in range(n0)])
    lifts = []
    for x0 in pool[:samples]:
        x1 = solve_integral(inc.T, x0)
        if x1 is not None:
            lifts.append((x0, x1))
    residues = []
    for x0, x1 in lifts:
        for y0, y1 in lifts:
            lam0 = _dot(x0, inv0.apply(y0))
            lam1 = _dot(x1, inv1.apply(y1))
            X = _sub(inv1.apply(x1), inc.apply(inv0.apply(x0)))
            Y = _sub(inv1.apply(y1), inc.apply(inv0.apply(y0)))
            corr = _dot(X, G1.apply(Y))
            r = lam0 - lam1 + corr
            residues.append(r - (r.numerator // r.denominator))
    return {
        "pairs": len(residues),
        "lifted": len(lifts),
        "residues": [str(r) for r in residues],
        "ok": all(r == 0 for r in residues),
    }


def _dot(a, b):
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def _sub(a, b):
    return [Fraction(x) - y for x, y in zip(a, b)]
