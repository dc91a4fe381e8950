"""Framed links as surgery presentations and the Kirby moves on them.

A link is modelled only by its framings and pairwise linking numbers.
Component indices are 0-based in the Python API; JSON move scripts use
1-based indices.
"""

import random
from dataclasses import dataclass

from .bilform import BilinearForm
from .decision import Decision
from .errors import IllegalMove, InputError
from .linalg import Matrix


class FramedLink:
    def __init__(self, framings, linking=None):
        framings = tuple(int(f) for f in framings)
        n = len(framings)
        if linking is None:
            linking = Matrix.zeros(n, n)
        elif not isinstance(linking, Matrix):
            linking = Matrix(linking, (n, n)) if n == 0 else Matrix(linking)
        if linking.shape != (n, n):
            raise InputError(f"linking matrix must be {n}x{n}")
        if not linking.is_symmetric():
            raise InputError("linking matrix must be symmetric")
        if any(linking[i, i] for i in range(n)):
            raise InputError("linking matrix must have zero diagonal")
        self.framings = framings
        self.linking = linking

    @classmethod
    def unknot(cls, framing):
        return cls([framing])

    @classmethod
    def unlink(cls, framings):
        return cls(framings)

    @classmethod
    def hopf(cls, f1=0, f2=0):
        return cls([f1, f2], [[0, 1], [1, 0]])

    @classmethod
    def from_gram(cls, gram):
        if not isinstance(gram, Matrix):
            gram = Matrix(gram)
        n = gram.rows
        lk = [[0 if i == j else gram[i, j] for j in range(n)] for i in range(n)]
        return cls(gram.diagonal(), Matrix(lk, (n, n)))

    @property
    def n(self):
        return len(self.framings)

    def gram(self):
        n = self.n
        rows = [[self.framings[i] if i == j else self.linking[i, j] for j in range(n)]
                for i in range(n)]
        return BilinearForm(Matrix(rows, (n, n)))

    def __eq__(self, other):
        if not isinstance(other, FramedLink):
            return NotImplemented
        return self.framings == other.framings and self.linking == other.linking

    def __hash__(self):
        return hash((self.framings, self.linking))

    def __repr__(self):
        return f"FramedLink({list(self.framings)}, {self.linking.tolist()})"

    def to_json(self):
        return {"framings": [str(f) for f in self.framings], "linking": self.linking.to_json()}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "framings" not in data:
            raise InputError("link object needs 'framings'")
        framings = [int(f) for f in data["framings"]]
        lk = data.get("linking")
        if lk is None or lk == []:
            return cls(framings)
        return cls(framings, Matrix.from_json(lk))


def gram(link):
    return link.gram()


@dataclass(frozen=True)
class BlowUp:
    sign: int

    def to_json(self):
        return {"blowup": self.sign}


@dataclass(frozen=True)
class BlowDown:
    index: int

    def to_json(self):
        return {"blowdown": self.index + 1}


@dataclass(frozen=True)
class HandleSlide:
    """Slide component ``i`` over component ``j``; ``sign`` picks the band."""

    i: int
    j: int
    sign: int

    def to_json(self):
        return {"slide": [self.i + 1, self.j + 1, self.sign]}

    def matrix(self, n):
        """Elementary E with e_i -> e_i + sign * e_j, so Gram -> E^T G E."""
        rows = [[int(r == c) for c in range(n)] for r in range(n)]
        rows[self.j][self.i] = self.sign
        return Matrix(rows, (n, n))


def move_from_json(obj):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputError(f"bad move {obj!r}")
    (kind, arg), = obj.items()
    try:
        if kind == "blowup":
            return BlowUp(int(arg))
        if kind == "blowdown":
            return BlowDown(int(arg) - 1)
        if kind == "slide":
            i, j, s = (int(x) for x in arg)
            return HandleSlide(i - 1, j - 1, s)
    except (TypeError, ValueError):
        pass
    raise InputError(f"bad move {obj!r}")


def apply_move(link, move):
    n = link.n
    lk = link.linking.tolist()
    f = list(link.framings)
    if isinstance(move, BlowUp):
        if move.sign not in (1, -1):
            raise IllegalMove("blow-up sign must be +1 or -1")
        rows = [r + [0] for r in lk] + [[0] * (n + 1)]
        return FramedLink(f + [move.sign], Matrix(rows, (n + 1, n + 1)))
    if isinstance(move, BlowDown):
        k = move.index
        if not 0 <= k < n:
            raise IllegalMove(f"no component {k}")
        if f[k] not in (1, -1):
            raise IllegalMove(f"component {k} has framing {f[k]}, not +-1")
        if any(lk[k]):
            raise IllegalMove(f"component {k} is linked with other components")
        keep = [i for i in range(n) if i != k]
        return FramedLink([f[i] for i in keep], link.linking.submatrix(keep, keep))
    if isinstance(move, HandleSlide):
        i, j, s = move.i, move.j, move.sign
        if not (0 <= i < n and 0 <= j < n):
            raise IllegalMove(f"slide indices {i}, {j} out of range")
        if i == j:
            raise IllegalMove("cannot slide a component over itself")
        if s not in (1, -1):
            raise IllegalMove("slide sign must be +1 or -1")
        f[i] = f[i] + f[j] + 2 * s * lk[i][j]
        new_row = [lk[i][k] + s * lk[j][k] for k in range(n)]
        new_row[j] = lk[i][j] + s * f[j]
        new_row[i] = 0
        for k in range(n):
            lk[i][k] = lk[k][i] = new_row[k]
        return FramedLink(f, Matrix(lk, (n, n)))
    raise IllegalMove(f"unknown move {move!r}")


def apply_moves(link, moves):
    for m in moves:
        link = apply_move(link, m)
    return link


def legal_moves(link):
    """Blow-downs available on ``link`` (blow-ups and slides are always legal)."""
    return [BlowDown(k) for k in range(link.n)
            if link.framings[k] in (1, -1) and not any(link.linking.row(k))]


def random_moves(link, length, rng):
    """A random legal move sequence of the given length."""
    moves = []
    for _ in range(length):
        options = ["up"]
        if link.n >= 2:
            options += ["slide", "slide"]
        downs = legal_moves(link)
        if downs:
            options.append("down")
        kind = rng.choice(options)
        if kind == "up":
            m = BlowUp(rng.choice((1, -1)))
        elif kind == "down":
            m = rng.choice(downs)
        else:
            i, j = rng.sample(range(link.n), 2)
            m = HandleSlide(i, j, rng.choice((1, -1)))
        moves.append(m)
        link = apply_move(link, m)
    return moves


def verify_boundary_invariance(link, moves):
    """Check that a move sequence preserves the boundary invariants.

    The report compares free rank and torsion linking form, the homology
    module, and the symbolic module of the boundary; it also checks that
    b+ and b- moved exactly as the blow-ups and blow-downs predict.
    """
    # imported here: invariants builds on this module
    from .discform import discriminant, torsion_forms_isomorphic
    from .invariants import z3

    before = link
    after = link
    dplus = dminus = 0
    for m in moves:
        if isinstance(m, BlowUp):
            if m.sign == 1:
                dplus += 1
            else:
                dminus += 1
        elif isinstance(m, BlowDown):
            if after.framings[m.index] == 1:
                dplus -= 1
            else:
                dminus -= 1
        after = apply_move(after, m)
    g0, g1 = before.gram(), after.gram()
    d0, d1 = discriminant(g0), discriminant(g1)
    s0, s1 = g0.signature, g1.signature
    same_free = d0.free_rank == d1.free_rank
    same_factors = d0.invariant_factors == d1.invariant_factors
    same_form = same_factors and torsion_forms_isomorphic(d0.torsion_form, d1.torsion_form) is Decision.YES
    same_module = z3(before).module == z3(after).module
    sig_ok = (s1.b_plus - s0.b_plus, s1.b_minus - s0.b_minus) == (dplus, dminus)
    return {
        "moves": [m.to_json() for m in moves],
        "free_rank": [d0.free_rank, d1.free_rank],
        "invariant_factors": [list(d0.invariant_factors), list(d1.invariant_factors)],
        "discriminant_preserved": same_free and same_form,
        "homology_preserved": same_free and same_factors,
        "z3_preserved": same_module,
        "signature_bookkeeping": sig_ok,
        "ok": same_free and same_form and same_module and sig_ok,
    }


def seed_links():
    """Small surgery presentations used by the randomized invariance suite."""
    return [
        FramedLink([]),
        FramedLink.unknot(0),
        FramedLink.unknot(2),
        FramedLink.unknot(-3),
        FramedLink.unlink([0, 0, 0]),
        FramedLink.hopf(0, 0),
        FramedLink.hopf(2, -1),
        FramedLink([2, 2, 2], [[0, 1, 0], [1, 0, 1], [0, 1, 0]]),
        FramedLink([-2, -2, -2, -2], [[0, 1, 0, 0], [1, 0, 1, 1], [0, 1, 0, 0], [0, 1, 0, 0]]),
        FramedLink([5, 0], [[0, 2], [2, 0]]),
    ]


def random_suite(n_sequences=100, max_length=8, seed=0, links=None):
    """Run ``n_sequences`` random legal sequences spread over the seed links."""
    rng = random.Random(seed)
    links = seed_links() if links is None else links
    reports = []
    for k in range(n_sequences):
        link = links[k % len(links)]
        moves = random_moves(link, rng.randint(1, max_length), rng)
        reports.append(verify_boundary_invariance(link, moves))
    return reports
