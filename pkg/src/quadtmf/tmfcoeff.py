"""The coefficient ring pi_* TMF as a curated, partial multiplication table.

Nothing here is computed from first principles.  Group presentations and
products come from a versioned JSON table; a product the table does not
know is returned as an explicit unknown element rather than guessed.

Degree-0 elements are integer polynomials in ``j``, written with monomial
keys ``"1"``, ``"j"``, ``"j^2"`` and so on.
"""

import json
import os
from dataclasses import dataclass, field
from importlib import resources

from .errors import InputError, OutOfRange, ValidationError

TABLE_ENV = "QUADTMF_TABLE"

# facts the shipped table must contain: (generator, degree, required order or None)
REQUIRED_GENERATORS = (
    ("eta", 1, 2),
    ("nu", 3, None),
    ("epsilon", 8, None),
    ("kappa", 14, None),
    ("kappabar", 20, None),
)


def _j_power(key):
    if key == "1":
        return 0
    if key == "j":
        return 1
    if key.startswith("j^"):
        try:
            k = int(key[2:])
        except ValueError:
            return None
        return k if k >= 2 else None
    return None


def _j_key(k):
    return "1" if k == 0 else ("j" if k == 1 else f"j^{k}")


@dataclass(frozen=True)
class Presentation:
    degree: int
    free_rank: int
    torsion: tuple          # (generator, order) pairs
    free_generators: tuple
    complete: bool
    ring: str = None
    units: tuple = ()

    def is_trivial(self):
        return self.complete and self.free_rank == 0 and not self.torsion and self.ring is None

    def describe(self):
        if self.ring:
            return self.ring
        parts = [f"Z<{g}>" for g in self.free_generators]
        parts += [f"Z/{o}<{g}>" for g, o in self.torsion]
        text = " + ".join(parts) if parts else "0"
        return text if self.complete else text + " (partial)"

    def to_json(self):
        return {"degree": self.degree, "free_rank": self.free_rank,
                "torsion": [[g, o] for g, o in self.torsion],
                "free_generators": list(self.free_generators),
                "complete": self.complete, "ring": self.ring, "units": list(self.units)}


class TmfCoeffTable:
    """Validated, immutable view of a coefficient table."""

    def __init__(self, data, source="<memory>"):
        self.source = source
        self.raw = data
        violations = _validate(data)
        if violations:
            raise ValidationError(violations)
        self.version = data.get("version")
        lo, hi = data["degree_range"]
        self.degree_range = (lo, hi)
        self.generators = {name: dict(g) for name, g in data["generators"].items()}
        self.groups = {int(k): v for k, v in data["groups"].items()}
        self.products = {}
        for p in data["products"]:
            self.products[(p["left"], p["right"])] = dict(p["value"])
        self.notes = list(data.get("notes", []))

    # presentation lookups

    def degree_of(self, name):
        if _j_power(name) is not None:
            return 0
        return self.generators[name]["degree"]

    def order_of(self, name):
        if _j_power(name) is not None:
            return 0
        return self.generators[name]["order"]

    def provenance(self, name):
        return self.generators[name]["provenance"]

    def group_at(self, n):
        lo, hi = self.degree_range
        if not lo <= n <= hi:
            raise OutOfRange(f"degree {n} outside table range [{lo}, {hi}]")
        g = self.groups.get(n)
        if g is None:
            return Presentation(n, 0, (), (), False)
        if n == 0:
            return Presentation(0, 0, (), ("j",), True, ring=g.get("ring", "Z[j]"),
                                units=tuple(g.get("units", ())))
        gens = g.get("generators", [])
        torsion = tuple((x, self.order_of(x)) for x in gens if self.order_of(x))
        free = tuple(x for x in gens if not self.order_of(x))
        return Presentation(n, len(free), torsion, free, bool(g.get("complete")))

    def is_known_zero_group(self, n):
        g = self.groups.get(n)
        return n != 0 and g is not None and g.get("complete") and not g.get("generators")

    # elements

    def element(self, degree, terms=None):
        return TmfElement.make(self, degree, terms or {})

    def zero(self, degree):
        return TmfElement.make(self, degree, {})

    def one(self):
        return TmfElement.make(self, 0, {"1": 1})

    def unit(self, sign=1):
        return TmfElement.make(self, 0, {"1": sign})

    def unknown(self, degree, reason):
        return TmfElement(self, degree, (), reason)

    def gen(self, name):
        if name in self.generators:
            return TmfElement.make(self, self.degree_of(name), {name: 1})
        if _j_power(name) is not None:
            return TmfElement.make(self, 0, {name: 1})
        raise InputError(f"unknown generator {name!r}")

    def _monomial_product(self, a, b):
        """Product of two basis monomials as a term dict, or an unknown reason."""
        ja, jb = _j_power(a), _j_power(b)
        if ja is not None and jb is not None:
            return {_j_key(ja + jb): 1}
        if ja == 0:
            return {b: 1}
        if jb == 0:
            return {a: 1}
        if (a, b) in self.products:
            return dict(self.products[(a, b)])
        if (b, a) in self.products:
            sign = (-1) ** (self.degree_of(a) * self.degree_of(b))
            return {k: sign * v for k, v in self.products[(b, a)].items()}
        deg = self.degree_of(a) + self.degree_of(b)
        if self.is_known_zero_group(deg):
            return {}
        return f"product {a}*{b} not in table"

    def mul(self, x, y):
        deg = x.degree + y.degree
        if x.is_zero() or y.is_zero():
            return self.zero(deg)
        if x.unknown or y.unknown:
            return self.unknown(deg, x.unknown or y.unknown)
        out = {}
        for a, ca in x.terms:
            for b, cb in y.terms:
                p = self._monomial_product(a, b)
                if isinstance(p, str):
                    return self.unknown(deg, p)
                for k, v in p.items():
                    out[k] = out.get(k, 0) + ca * cb * v
        return TmfElement.make(self, deg, out)

    def to_json(self):
        return self.raw


@dataclass(frozen=True)
class TmfElement:
    """Element of pi_n TMF: an integer combination of basis monomials.

    ``unknown`` holds a reason string when the value could not be resolved
    from the table; in that case ``terms`` is empty and the element is not
    zero.
    """

    table: TmfCoeffTable = field(repr=False, compare=False)
    degree: int
    terms: tuple
    unknown: str = None

    @classmethod
    def make(cls, table, degree, terms):
        canon = {}
        for name, c in terms.items():
            if name not in table.generators and _j_power(name) is None:
                raise InputError(f"unknown generator {name!r}")
            if table.degree_of(name) != degree:
                raise InputError(f"{name} has degree {table.degree_of(name)}, not {degree}")
            o = table.order_of(name)
            c = int(c) % o if o else int(c)
            if o and c > o // 2:
                c -= o  # symmetric representative, so -nu prints as -nu
            if c:
                canon[name] = c
        return cls(table, degree, tuple(sorted(canon.items(), key=_term_key)))

    def is_zero(self):
        return self.unknown is None and not self.terms

    def is_known(self):
        return self.unknown is None

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if self.degree != other.degree:
            raise InputError(f"cannot add degree {self.degree} and {other.degree}")
        if self.unknown or other.unknown:
            return self.table.unknown(self.degree, self.unknown or other.unknown)
        d = dict(self.terms)
        for k, v in other.terms:
            d[k] = d.get(k, 0) + v
        return TmfElement.make(self.table, self.degree, d)

    __radd__ = __add__

    def __neg__(self):
        if self.unknown:
            return self
        return TmfElement.make(self.table, self.degree, {k: -v for k, v in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if self.unknown:
                return self if other else self.table.zero(self.degree)
            return TmfElement.make(self.table, self.degree, {k: other * v for k, v in self.terms})
        return self.table.mul(self, other)

    def __rmul__(self, other):
        return self * other

    def __str__(self):
        if self.unknown:
            return "Unknown"
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms:
            mono = "" if k == "1" else k
            if c == 1:
                s = mono or "1"
            elif c == -1:
                s = "-" + (mono or "1")
            else:
                s = f"{c}{mono}" if mono else str(c)
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        d = {"degree": self.degree, "value": str(self)}
        if self.unknown:
            d["unknown"] = self.unknown
        else:
            d["terms"] = {k: str(v) for k, v in self.terms}
        return d


def _term_key(item):
    name = item[0]
    jp = _j_power(name)
    return (0, jp, "") if jp is not None else (1, 0, name)


def _validate(data):
    """Every violated structural rule or required fact, as messages."""
    v = []
    if not isinstance(data, dict):
        return ["table must be a JSON object"]
    for key in ("degree_range", "generators", "groups", "products"):
        if key not in data:
            v.append(f"missing top-level field {key!r}")
    if v:
        return v
    try:
        lo, hi = (int(x) for x in data["degree_range"])
    except (TypeError, ValueError):
        return ["degree_range must be two integers"]
    gens = data["generators"]
    groups = data["groups"]
    try:
        group_deg = {int(k): g for k, g in groups.items()}
    except ValueError:
        return ["group keys must be integer degrees"]

    for name, g in gens.items():
        if not isinstance(g, dict) or "degree" not in g or "order" not in g:
            v.append(f"generator {name}: needs degree and order")
            continue
        if g.get("provenance") not in ("core", "external"):
            v.append(f"generator {name}: provenance must be 'core' or 'external'")
        if not lo <= g["degree"] <= hi:
            v.append(f"generator {name}: degree {g['degree']} outside degree_range")
        if g["order"] < 0:
            v.append(f"generator {name}: negative order")
        if name != "j" and g["degree"] != 0:
            listed = group_deg.get(g["degree"], {}).get("generators", [])
            if name not in listed:
                v.append(f"generator {name}: not listed in the degree {g['degree']} group")
    for n, g in group_deg.items():
        for name in g.get("generators", []):
            if name not in gens:
                v.append(f"degree {n}: unknown generator {name}")
            elif gens[name]["degree"] != n:
                v.append(f"degree {n}: generator {name} has degree {gens[name]['degree']}")

    # required facts
    for name, deg, order in REQUIRED_GENERATORS:
        g = gens.get(name)
        if g is None:
            v.append(f"fact: generator {name} in degree {deg} is missing")
            continue
        if g.get("degree") != deg:
            v.append(f"fact: {name} must have degree {deg}")
        if order is not None and g.get("order") != order:
            v.append(f"fact: {order}{name} = 0 must hold ({name} needs order {order})")
    g0 = group_deg.get(0)
    if g0 is None or g0.get("ring") != "Z[j]" or "j" not in gens or gens["j"].get("degree") != 0:
        v.append("fact: pi_0 must be the polynomial ring Z[j]")
    elif sorted(g0.get("units", [])) != [-1, 1]:
        v.append("fact: the units of pi_0 must be exactly +1 and -1")
    gm1 = group_deg.get(-1)
    if gm1 is None or not gm1.get("complete") or gm1.get("generators"):
        v.append("fact: pi_-1 must be recorded as the trivial group")

    # products: degrees, torsion orders, graded commutativity
    stored = {}
    for p in data["products"]:
        a, b, val = p.get("left"), p.get("right"), p.get("value")
        if a not in gens or b not in gens or not isinstance(val, dict):
            v.append(f"product {a}*{b}: malformed entry")
            continue
        if p.get("provenance") not in ("core", "external"):
            v.append(f"product {a}*{b}: provenance must be 'core' or 'external'")
        deg = gens[a]["degree"] + gens[b]["degree"]
        bad = False
        for t, c in val.items():
            if t not in gens:
                v.append(f"product {a}*{b}: unknown generator {t}")
                bad = True
            elif gens[t]["degree"] != deg:
                v.append(f"product {a}*{b}: {t} is not in degree {deg}")
                bad = True
        if bad:
            continue
        for src in (a, b):
            o = gens[src]["order"]
            if not o:
                continue
            for t, c in val.items():
                ot = gens[t]["order"]
                if ot == 0 or (o * int(c)) % ot:
                    v.append(f"product {a}*{b}: {o}{src} = 0 but {o} times the product is not 0")
                    break
        stored[(a, b)] = {t: int(c) for t, c in val.items()}
    for (a, b), val in stored.items():
        if (b, a) in stored and a < b:
            sign = (-1) ** (gens[a]["degree"] * gens[b]["degree"])
            lhs = _reduce(val, gens)
            rhs = _reduce({t: sign * c for t, c in stored[(b, a)].items()}, gens)
            if lhs != rhs:
                v.append(f"graded commutativity fails for {a}*{b}")
    return v


def _reduce(terms, gens):
    out = {}
    for t, c in terms.items():
        o = gens[t]["order"]
        c = c % o if o else c
        if c:
            out[t] = c
    return out


def load_table(path=None):
    """Load and validate a coefficient table.

    Without a path, ``$QUADTMF_TABLE`` is used if set, else the shipped table.
    """
    if path is None:
        path = os.environ.get(TABLE_ENV) or None
    if path is None:
        text = resources.files("quadtmf").joinpath("data/pi_tmf.json").read_text()
        source = "builtin"
    else:
        with open(path) as fh:
            text = fh.read()
        source = str(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([f"table is not valid JSON: {exc}"]) from None
    return TmfCoeffTable(data, source)


_DEFAULT = {}


def default_table():
    key = os.environ.get(TABLE_ENV)
    if key not in _DEFAULT:
        _DEFAULT[key] = load_table()
    return _DEFAULT[key]


def mul(x, y):
    return x.table.mul(x, y)


def group_at(table, n):
    return table.group_at(n)

