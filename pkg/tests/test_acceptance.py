"""One group of tests per acceptance criterion.

A line per criterion ("criterion N: PASS|FAIL") is printed in the terminal
summary by conftest.py.
"""

import copy
import itertools
import json
import random
import time
from importlib import resources

import pytest

from quadtmf import tmfcoeff
from quadtmf.bilform import BilinearForm, congruent_stably_bruteforce, direct_sum, hyperbolic, named_form, pullback
from quadtmf.decision import Decision
from quadtmf.discform import discriminant, pm_equivalent, torsion_forms_isomorphic
from quadtmf.errors import ValidationError
from quadtmf.invariants import ThreeManifoldPresentation as P
from quadtmf.invariants import orientation_reverse, z3, z4
from quadtmf.jacobi import (JacobiEvaluator, LatticeShift, check_transformation, cocycle_composition_check,
                            random_sl2, sample_points)
from quadtmf.kirby import random_suite
from quadtmf.linalg import Matrix
from quadtmf.qseries import e4_series, edge_image, sigma, theta_series
from quadtmf.tmfmod import cone_nu, from_bilinear, s2xs2_composite, tensor, tmf
from quadtmf.tmfmod import direct_sum as msum


def form(rows):
    return BilinearForm(rows)


# 1

@pytest.mark.criterion(1)
def test_golden_values():
    t0 = time.perf_counter()
    assert z3(P.s3()).module == tmf()
    assert z3(P.s2xs1()).module == msum(tmf(), tmf(-1))
    for g in range(4):
        expected = tensor(*[msum(tmf(), tmf(-1))] * (2 * g + 1))
        assert z3(P.surface_times_circle(g)).module == expected

    assert from_bilinear(form([[1]])) == tmf(-3)
    assert from_bilinear(form([[-1]])) == tmf(2)
    assert from_bilinear(form([[2]])) == cone_nu(-5)
    assert from_bilinear(form([[-2]])) == cone_nu(0)

    r = z4(form([[1]]))
    assert (r.degree, str(r.element)) == (3, "nu")
    r = z4(form([[1, 0], [0, 1]]))
    assert (r.degree, str(r.element)) == (6, "nu^2")
    r = z4(form([[-1]]))
    assert r.element.is_zero()
    r = z4(hyperbolic(1))
    assert (r.degree, str(r.element), r.conditional) == (1, "eta", True)

    f = s2xs2_composite()
    eta = f.table.gen("eta")
    assert f.scalar() == eta
    assert (2 * eta).is_zero()
    assert time.perf_counter() - t0 < 1.0


# 2

@pytest.mark.criterion(2)
def test_poincare_identity():
    a = Matrix([[1, 1], [-1, 0], [0, 1]])
    b = BilinearForm.diag([1, -1, -1])
    assert pullback(a, b).gram == Matrix([[0, 1], [1, 0]])


# 3

def _random_form(rng, max_rank=5, bound=3):
    n = rng.randint(0, max_rank)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randint(-bound, bound)
    return BilinearForm(Matrix(rows, (n, n)))


@pytest.mark.criterion(3)
def test_rewrite_rules_random_forms():
    rng = random.Random(2024)
    plus, minus = form([[1]]), form([[-1]])
    failures = []
    for k in range(200):
        b = _random_form(rng)
        c = _random_form(rng, max_rank=2)
        lb = from_bilinear(b)
        checks = {
            "plus": from_bilinear(direct_sum(b, plus)).shift(3) == lb,
            "minus": from_bilinear(direct_sum(b, minus)).shift(-2) == lb,
            "tensor": from_bilinear(direct_sum(b, c)) == tensor(lb, from_bilinear(c)),
            "dual": lb.dual().dual() == lb,
        }
        bad = [name for name, ok in checks.items() if not ok]
        if bad:
            failures.append((k, b.gram.tolist(), bad))
    assert failures == []


# 4

@pytest.mark.criterion(4)
def test_kirby_invariance_suite():
    t0 = time.perf_counter()
    reports = random_suite(n_sequences=100, max_length=8, seed=7)
    elapsed = time.perf_counter() - t0
    assert len(reports) == 100
    assert all(1 <= len(r["moves"]) <= 8 for r in reports)
    bad = [r for r in reports if not (r["discriminant_preserved"] and r["z3_preserved"])]
    assert bad == []
    assert elapsed < 10.0


# 5

@pytest.mark.criterion(5)
def test_pm_equivalent_against_oracle():
    vals = range(-2, 3)
    forms = [BilinearForm.empty()]
    forms += [form([[a]]) for a in vals]
    forms += [form([[a, b], [b, c]]) for a, b, c in itertools.product(vals, repeat=3)]
    contradictions = []
    confirmed = 0
    for b, c in itertools.product(forms, repeat=2):
        if congruent_stably_bruteforce(b, c) is Decision.YES:
            confirmed += 1
            if pm_equivalent(b, c) is not Decision.YES:
                contradictions.append((b.gram.tolist(), c.gram.tolist()))
    assert contradictions == []
    assert confirmed > len(forms)  # the oracle does find more than the diagonal


# 6

@pytest.mark.criterion(6)
def test_theta_pipeline():
    t0 = time.perf_counter()
    e8 = named_form("E8")
    N = 11
    auto = theta_series(e8, N)
    direct = theta_series(e8, N, method="direct")
    assert auto[0] == 1
    for n in range(1, N):
        assert auto[n] == direct[n] == 240 * sigma(3, n)
    assert auto.agrees_with(e4_series(N))

    ee = theta_series(direct_sum(e8, e8), N)
    d16 = theta_series(named_form("D16+"), N)
    assert [ee[n] for n in range(N)] == [d16[n] for n in range(N)]

    img = edge_image(e8, 10)
    assert img.is_integral()
    assert img.lowest == -1 and img[-1] == 1
    assert img.weight == -8
    assert img.meta["conjectural"] is True
    assert time.perf_counter() - t0 < 60.0


# 7

def _unit(n, i=0):
    return tuple(int(k == i) for k in range(n))


@pytest.mark.criterion(7)
@pytest.mark.parametrize("name", ["A1", "E8"])
def test_jacobi_laws(name):
    b = named_form(name)
    d = b.rank
    ev = JacobiEvaluator(b, tol=1e-8)
    rng = random.Random(99)
    t = check_transformation(ev, "T", sample_points(d, 5, rng))
    assert t["max_residual"] < 1e-8
    shift = LatticeShift(_unit(d), _unit(d, d - 1))
    s = check_transformation(ev, shift, sample_points(d, 5, rng))
    assert s["max_residual"] < 1e-8
    if d == 8:
        r = check_transformation(ev, "S", sample_points(d, 5, rng, near_i=True))
        assert r["max_residual"] < 1e-8
    pairs = [(random_sl2(rng), random_sl2(rng)) for _ in range(10)]
    c = cocycle_composition_check(ev, pairs, sample_points(d, 3, rng))
    assert c["max_residual"] < 1e-8


# 8

@pytest.mark.criterion(8)
def test_orientation_reverse_paths():
    cases = [P.s3(), P.s2xs1()]
    cases += [P.lens(n) for n in (-3, -2, -1, 1, 2, 3)]
    cases += [P.surface_times_circle(g) for g in range(3)]
    mismatches = [m.label for m in cases if not orientation_reverse(m)[1]["agree"]]
    assert mismatches == []


# 9

def _shipped():
    return json.loads(resources.files("quadtmf").joinpath("data/pi_tmf.json").read_text())


@pytest.mark.criterion(9)
def test_shipped_table_valid():
    table = tmfcoeff.TmfCoeffTable(_shipped())
    for g in ("eta", "nu", "epsilon", "kappa", "kappabar"):
        assert g in table.generators
    eta = table.gen("eta")
    assert (2 * eta).is_zero()
    assert table.group_at(-1).is_trivial()
    assert table.group_at(0).to_json()["units"] == [1, -1]


@pytest.mark.criterion(9)
@pytest.mark.parametrize("mutate, expected", [
    (lambda d: d["generators"].__setitem__("eta", dict(d["generators"]["eta"], order=4)), "2eta = 0"),
    (lambda d: d["generators"].pop("kappa"), "kappa"),
    (lambda d: d["groups"].__setitem__("-1", {"complete": True, "generators": ["eta"],
                                              "provenance": "core"}), "pi_-1"),
    (lambda d: d["groups"]["0"].__setitem__("units", [1, -1, 2]), "units of pi_0"),
])
def test_mutated_table_rejected(mutate, expected):
    data = copy.deepcopy(_shipped())
    mutate(data)
    with pytest.raises(ValidationError) as exc:
        tmfcoeff.TmfCoeffTable(data)
    assert any(expected in v for v in exc.value.violations), exc.value.violations
