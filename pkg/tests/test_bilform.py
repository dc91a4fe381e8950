import random

import pytest

from quadtmf.bilform import (BilinearForm, QuadraticForm, congruent_stably_bruteforce, direct_sum, find_congruence,
                             hyperbolic, inverse_partial, named_form, named_forms, pullback, qform_convert,
                             radical_split, signature, stabilize, unimodular_stable_form)
from quadtmf.decision import Decision
from quadtmf.errors import DimensionMismatch, NonEvenDiagonal, NotSymmetric
from quadtmf.linalg import Matrix


def test_signature_records():
    s = signature(BilinearForm([[1]]))
    assert (s.b_plus, s.b_minus, s.b_zero, s.parity, s.det, s.unimodular) == (1, 0, 0, "odd", 1, True)
    s = signature(hyperbolic())
    assert (s.b_plus, s.b_minus, s.b_zero, s.parity, s.det) == (1, 1, 0, "even", -1)
    s = signature(named_form("E8"))
    assert (s.b_plus, s.b_minus, s.b_zero, s.parity, s.det) == (8, 0, 0, "even", 1)


def test_named_forms_load_with_checks():
    forms = named_forms()
    assert {"E8", "D16+", "A1", "A2", "D4", "H"} <= set(forms)
    d16 = forms["D16+"]
    assert d16.is_even and d16.is_unimodular and d16.is_positive_definite and d16.rank == 16


def test_rejects_bad_gram():
    with pytest.raises(NotSymmetric):
        BilinearForm([[1, 2], [0, 1]])
    with pytest.raises(DimensionMismatch):
        BilinearForm(Matrix([[1, 2]]))


def test_pullback():
    b = BilinearForm([[2, 1], [1, 3]])
    assert pullback(Matrix.identity(2), b) == b
    e = Matrix([[1, 0], [1, 1]])  # e_0 -> e_0 + e_1
    p = pullback(e, b)
    assert p[0, 0] == b[0, 0] + b[1, 1] + 2 * b[0, 1]
    with pytest.raises(DimensionMismatch):
        pullback(Matrix.identity(3), b)


def test_direct_sum_and_signature_additivity(rng):
    b = BilinearForm([[3]])
    assert direct_sum(b, BilinearForm.empty()) == b
    assert direct_sum(BilinearForm([[1]]), BilinearForm([[-1]])) == BilinearForm.diag([1, -1])
    for _ in range(50):
        forms = []
        for _ in range(2):
            n = rng.randint(0, 3)
            rows = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    rows[i][j] = rows[j][i] = rng.randint(-3, 3)
            forms.append(BilinearForm(Matrix(rows, (n, n))))
        s, a, c = signature(direct_sum(*forms)), signature(forms[0]), signature(forms[1])
        assert (s.b_plus, s.b_minus, s.b_zero) == (a.b_plus + c.b_plus, a.b_minus + c.b_minus,
                                                   a.b_zero + c.b_zero)


def test_qform_round_trip():
    q = QuadraticForm(Matrix([[1]]))
    assert qform_convert(q) == BilinearForm([[2]])
    assert inverse_partial(BilinearForm([[2]])) == q
    with pytest.raises(NonEvenDiagonal):
        inverse_partial(BilinearForm([[1]]))


def test_radical_split():
    k, core, basis = radical_split(BilinearForm([[0]]))
    assert k == 1 and core.rank == 0 and basis == Matrix.identity(1)
    b = BilinearForm([[2, 1], [1, 3]])
    k, core, basis = radical_split(b)
    assert (k, core, basis) == (0, b, Matrix.identity(2))
    k, core, basis = radical_split(BilinearForm([[0, 0], [0, 3]]))
    assert k == 1 and core == BilinearForm([[3]]) and basis == Matrix.identity(2)


def test_unimodular_stable_form():
    assert unimodular_stable_form(hyperbolic()) == (1, 1)
    assert unimodular_stable_form(named_form("E8")) == (8, 0)
    assert unimodular_stable_form(BilinearForm.diag([1, 1, -1])) == (2, 1)


def test_bruteforce_oracle():
    b = BilinearForm([[2, 1], [1, 3]])
    assert congruent_stably_bruteforce(b, b, stab_limit=0) is Decision.YES
    h, d = hyperbolic(), BilinearForm.diag([1, -1])
    assert congruent_stably_bruteforce(h, d, stab_limit=0) is Decision.INCONCLUSIVE
    assert congruent_stably_bruteforce(h, d, stab_limit=1) is Decision.YES
    # different determinants are never congruent; the search can only give up
    assert congruent_stably_bruteforce(BilinearForm([[2]]), BilinearForm([[3]])) is Decision.INCONCLUSIVE


def test_find_congruence_returns_witness():
    b = BilinearForm([[2, 1], [1, 2]])
    c = BilinearForm([[2, -1], [-1, 2]])
    u = find_congruence(b, c)
    assert u is not None and pullback(u, b) == c and abs(u.det()) == 1


def test_stabilize():
    s = stabilize(BilinearForm([[2]]), plus=1, minus=2)
    assert list(s.gram.diagonal()) == [2, 1, -1, -1]


def test_json_round_trip():
    b = named_form("E8")
    assert BilinearForm.from_json(b.to_json()) == b
    assert BilinearForm.from_json([[1, 0], [0, -1]]) == BilinearForm.diag([1, -1])
