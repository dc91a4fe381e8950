"""Numeric multivariable theta function and its transformation laws.

theta_b(tau, z) = sum_v exp(pi i tau b(v,v) + 2 pi i b(v, z)).  Sums are cut
at b(v, v) <= 2 R^2 and come with a rigorous bound on the discarded tail, so
a residual below tolerance is meaningful.  Double precision goes through
numpy; higher precision through mpmath.
"""

import cmath
import math
import random
from dataclasses import dataclass

import mpmath
import numpy as np

from . import lattice
from .bilform import BilinearForm
from .errors import (InputError, NotEven, NotInUpperHalfPlane, NotPositiveDefinite, NotSL2,
                     PreconditionFailed, TailBoundTooLarge)

MAX_VECTORS = 6_000_000


@dataclass(frozen=True)
class SL2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(isinstance(x, int) for x in vals) or self.a * self.d - self.b * self.c != 1:
            raise NotSL2(f"{vals} is not an integer matrix of determinant 1")

    def __matmul__(self, o):
        return SL2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                   self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def act(self, tau, z):
        j = self.c * tau + self.d
        return (self.a * tau + self.b) / j, [x / j for x in z]

    def to_json(self):
        return {"sl2": [self.a, self.b, self.c, self.d]}


@dataclass(frozen=True)
class LatticeShift:
    m1: tuple
    m2: tuple

    def act(self, tau, z):
        return tau, [x + p * tau + q for x, p, q in zip(z, self.m1, self.m2)]

    def to_json(self):
        return {"shift": [list(self.m1), list(self.m2)]}


S = SL2(0, -1, 1, 0)
T = SL2(1, 1, 0, 1)
IDENTITY = SL2(1, 0, 0, 1)


def parse_element(element, rank=1):
    """'S', 'T', 'I', 'a,b,c,d', or 'shift:m1;m2' with comma-separated vectors."""
    if isinstance(element, (SL2, LatticeShift)):
        return element
    if isinstance(element, (tuple, list)) and len(element) == 4:
        return SL2(*[int(x) for x in element])
    s = str(element).strip()
    named = {"S": S, "T": T, "I": IDENTITY}
    if s in named:
        return named[s]
    if s.startswith("shift:"):
        parts = s[6:].split(";")
        if len(parts) != 2:
            raise InputError("shift element must look like shift:m1;m2")
        m1, m2 = (tuple(int(x) for x in p.split(",")) for p in parts)
        if len(m1) != rank or len(m2) != rank:
            raise InputError(f"shift vectors must have length {rank}")
        return LatticeShift(m1, m2)
    try:
        vals = [int(x) for x in s.split(",")]
    except ValueError:
        raise InputError(f"cannot parse group element {element!r}") from None
    if len(vals) != 4:
        raise InputError(f"cannot parse group element {element!r}")
    return SL2(*vals)


class JacobiEvaluator:
    """Theta evaluation and cocycle factors for a fixed form ``b``."""

    def __init__(self, b, R=None, precision=53, tol=1e-8):
        if not isinstance(b, BilinearForm):
            b = BilinearForm(b)
        if R is not None and R < 1:
            raise InputError("cutoff radius R must be at least 1")
        if precision < 53:
            raise InputError("precision must be at least 53 bits")
        self.b = b
        self.R = R
        self.precision = precision
        self.tol = tol
        self.G = np.array(b.gram.tolist(), dtype=float).reshape(b.rank, b.rank)
        self._vectors = None     # (bound, coords, norms)
        self._rho = None
        if b.rank and b.is_positive_definite:
            pivots, _ = lattice.ldl(b.gram)
            self._rho = 0.5 * math.sqrt(float(sum(pivots)))

    # theta evaluation

    def _require_theta(self):
        if not self.b.is_positive_definite:
            raise NotPositiveDefinite("theta evaluation needs a positive definite form")
        if not self.b.is_even:
            raise NotEven("theta evaluation needs an even form")

    def _y_norm(self, z):
        y = np.array([complex(x).imag for x in z])
        return math.sqrt(max(float(y @ self.G @ y), 0.0)) if len(y) else 0.0

    def tail_bound(self, X, t, s):
        """Upper bound for sum over b(v,v) > X of |exp(pi i tau b(v,v) + 2 pi i b(v,z))|.

        Here t = Im tau and s = sqrt(b(Im z, Im z)).  Lattice points with
        b(v,v) <= r^2 number at most vol(ball of radius r + rho) / sqrt(det),
        rho = sqrt(sum of Gram-Schmidt norms) / 2 being the nearest-plane
        rounding radius, so translated rounding boxes tile space.
        """
        d = self.b.rank
        if d == 0:
            return 0.0
        rho = self._rho
        logc = (d / 2) * math.log(math.pi) - math.lgamma(d / 2 + 1) - 0.5 * math.log(abs(self.b.det))
        r0 = math.sqrt(X)
        peak = s / t
        total = 0.0
        for k in range(100000):
            lo, hi = r0 + k, r0 + k + 1
            r = min(max(peak, lo), hi)
            logterm = logc + d * math.log(hi + rho) - math.pi * t * r * r + 2 * math.pi * s * r
            if lo > peak and logterm < -745:
                break
            total += math.exp(min(logterm, 700))
        return total

    def cutoff(self, tau, z):
        """Smallest even norm bound X whose tail bound is below tol / 10."""
        t = tau.imag
        s = self._y_norm(z)
        X = 2
        while self.tail_bound(X, t, s) > self.tol / 10:
            X += 2
            if X > 10 ** 6:
                break
        return X

    def _vectors_upto(self, X):
        if self._vectors is None or self._vectors[0] < X:
            est = self._estimate_count(X)
            if est > MAX_VECTORS:
                raise TailBoundTooLarge(
                    f"reaching tolerance {self.tol:g} needs about {est:.3g} lattice vectors")
            coords, norms = lattice.short_vector_array(self.b.gram, X)
            self._vectors = (X, coords, norms)
        _, coords, norms = self._vectors
        keep = norms <= X
        return coords[keep], norms[keep]

    def _estimate_count(self, X):
        d = self.b.rank
        return math.exp((d / 2) * math.log(math.pi * X) - math.lgamma(d / 2 + 1)
                        - 0.5 * math.log(abs(self.b.det)))

    def theta_eval(self, tau, z=None, with_bound=False):
        """theta_b(tau, z); with_bound also returns (tail_bound, X)."""
        self._require_theta()
        tau = complex(tau)
        if tau.imag <= 0:
            raise NotInUpperHalfPlane(f"Im(tau) must be positive, got {tau}")
        z = [0j] * self.b.rank if z is None else [complex(x) for x in z]
        if len(z) != self.b.rank:
            raise InputError(f"z must have {self.b.rank} entries")
        if self.R is not None:
            X = 2 * int(self.R) ** 2
            bound = self.tail_bound(X, tau.imag, self._y_norm(z))
            if bound > self.tol:
                raise TailBoundTooLarge(f"tail bound {bound:.3g} exceeds tolerance {self.tol:g} at R={self.R}")
        else:
            X = self.cutoff(tau, z)
            bound = self.tail_bound(X, tau.imag, self._y_norm(z))
        coords, norms = self._vectors_upto(X)
        if self.precision > 53:
            val = self._theta_mp(tau, z, coords, norms)
        else:
            gz = self.G @ np.array(z, dtype=complex)
            phase = 1j * math.pi * tau * norms + 2j * math.pi * (coords @ gz)
            val = complex(np.exp(phase).sum())
        return (val, bound, X) if with_bound else val

    def _theta_mp(self, tau, z, coords, norms):
        with mpmath.workprec(self.precision):
            t = mpmath.mpc(tau)
            gz = [mpmath.fsum(self.b.gram[i, j] * mpmath.mpc(z[j]) for j in range(self.b.rank))
                  for i in range(self.b.rank)]
            acc = mpmath.mpc(0)
            for v, n in zip(coords.tolist(), norms.tolist()):
                e = mpmath.pi * 1j * t * n + 2j * mpmath.pi * mpmath.fsum(a * g for a, g in zip(v, gz))
                acc += mpmath.exp(e)
            return complex(acc)

    # automorphy

    def bz(self, x, y):
        return complex(np.array(x, dtype=complex) @ self.G @ np.array(y, dtype=complex))

    def cocycle_factor(self, element, tau, z):
        """Multiplier of the Looijenga line bundle for ``element`` at (tau, z)."""
        g = parse_element(element, self.b.rank)
        tau = complex(tau)
        z = [complex(x) for x in z]
        if isinstance(g, SL2):
            j = g.c * tau + g.d
            return cmath.exp(math.pi * 1j * g.c * self.bz(z, z) / j)
        m1 = list(g.m1)
        return cmath.exp(-2j * math.pi * (self.bz(z, m1) + 0.5 * self.bz(m1, m1) * tau))

    def weight_factor(self, element, tau):
        g = parse_element(element, self.b.rank)
        if isinstance(g, LatticeShift):
            return 1.0
        j = g.c * complex(tau) + g.d
        d = self.b.rank
        if d % 2 == 0:
            return j ** (d // 2)
        return cmath.exp((d / 2) * cmath.log(j))


def _check_s_allowed(ev, g):
    if isinstance(g, SL2) and g.c != 0 and not ev.b.is_unimodular:
        raise PreconditionFailed("transformation laws with c != 0 are only checked for unimodular forms")
    if isinstance(g, SL2) and ev.b.rank % 8:
        if g.c != 0:
            raise PreconditionFailed("laws with c != 0 need rank divisible by 8")


def check_transformation(ev, element, samples, tol=None):
    """Max residual of the transformation law of theta_b under ``element``."""
    tol = ev.tol if tol is None else tol
    g = parse_element(element, ev.b.rank)
    _check_s_allowed(ev, g)
    residuals = []
    tails = []
    for tau, z in samples:
        tau = complex(tau)
        z = [complex(x) for x in z]
        t2, z2 = g.act(tau, z)
        lhs, b1, _ = ev.theta_eval(t2, z2, with_bound=True)
        rhs0, b2, _ = ev.theta_eval(tau, z, with_bound=True)
        rhs = ev.weight_factor(g, tau) * ev.cocycle_factor(g, tau, z) * rhs0
        residuals.append(abs(lhs - rhs))
        tails.append(max(b1, b2))
    worst = max(residuals) if residuals else 0.0
    return {
        "element": g.to_json(),
        "samples": len(residuals),
        "max_residual": worst,
        "residuals": residuals,
        "max_tail_bound": max(tails) if tails else 0.0,
        "tol": tol,
        "ok": worst < tol,
    }


def sample_points(rank, n, rng=None, near_i=False):
    """Random (tau, z) pairs; near_i keeps tau close to i for the S-law."""
    rng = rng or random.Random(0)
    out = []
    for _ in range(n):
        if near_i:
            tau = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.9, 1.1))
        else:
            tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5))
        z = [complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.1, 0.1)) for _ in range(rank)]
        out.append((tau, z))
    return out


def random_sl2(rng, bound=3):
    while True:
        a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
        if a * d - b * c == 1:
            return SL2(a, b, c, d)


def cocycle_composition_check(ev, pairs, samples, tol=None):
    """factor(g1 g2, p) == factor(g1, g2 p) * factor(g2, p) for each pair and sample.

    The line-bundle multiplier and the weight factor (c tau + d) are checked
    separately, since each is a cocycle on its own.
    """
    tol = ev.tol if tol is None else tol
    worst = 0.0
    for g1, g2 in pairs:
        g1 = parse_element(g1, ev.b.rank)
        g2 = parse_element(g2, ev.b.rank)
        g12 = g1 @ g2
        for tau, z in samples:
            tau = complex(tau)
            t2, z2 = g2.act(tau, z)
            lhs = ev.cocycle_factor(g12, tau, z)
            rhs = ev.cocycle_factor(g1, t2, z2) * ev.cocycle_factor(g2, tau, z)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
            j12 = g12.c * tau + g12.d
            j = (g1.c * t2 + g1.d) * (g2.c * tau + g2.d)
            worst = max(worst, abs(j12 - j) / max(1.0, abs(j12)))
    return {"pairs": len(pairs), "max_residual": worst, "tol": tol, "ok": worst < tol}
