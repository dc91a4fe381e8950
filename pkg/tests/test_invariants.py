import pytest

from quadtmf.bilform import BilinearForm, direct_sum, hyperbolic, named_form
from quadtmf.errors import InclusionNotIsometric, NotUnimodular
from quadtmf.invariants import (CobordismData, FourManifoldClass, ThreeManifoldPresentation, cobordism_degree,
                                cobordism_linking_check, orientation_reverse, z3, z4)
from quadtmf.linalg import Matrix
from quadtmf.tmfmod import cone_nu, direct_sum as msum, tmf


def test_z3_examples():
    assert z3(ThreeManifoldPresentation.s3()).module == tmf()
    r = z3(ThreeManifoldPresentation.s2xs1())
    assert r.module == msum(tmf(), tmf(-1)) and r.b1 == 1
    assert z3(ThreeManifoldPresentation.lens(2)).module == cone_nu(-2)


def test_z3_kirby_invariant():
    # blowing up changes W but not M
    m = ThreeManifoldPresentation.from_gram(Matrix([[2, 1], [1, 3]]))
    n = ThreeManifoldPresentation.from_gram(direct_sum(BilinearForm([[2, 1], [1, 3]]), BilinearForm([[-1]])).gram)
    assert z3(m).module == z3(n).module


def test_orientation_reverse_lens():
    module, report = orientation_reverse(ThreeManifoldPresentation.lens(2))
    assert report["agree"]
    assert module == z3(ThreeManifoldPresentation.lens(-2)).module


def test_z4_examples():
    r = z4(BilinearForm([[1]]))
    assert (r.degree, str(r.element), r.sign_ambiguous) == (3, "nu", True)
    assert str(z4(BilinearForm([[1]]), sign=-1).element) == "-nu"
    assert z4(BilinearForm.diag([1, 1])).degree == 6
    assert z4(BilinearForm([[-1]])).element.is_zero()
    r = z4(direct_sum(hyperbolic(), hyperbolic()))
    assert (r.degree, str(r.element), r.conditional) == (2, "eta^2", True)
    r = z4(named_form("E8"))
    assert r.degree == 24 and not r.element.is_known()
    with pytest.raises(NotUnimodular):
        z4(BilinearForm([[2]]))


def test_z4_multiplicative_on_diagonal():
    one = z4(BilinearForm([[1]])).element
    for n in range(1, 4):
        r = z4(BilinearForm.diag([1] * n))
        expected = one
        for _ in range(n - 1):
            expected = expected * one
        assert r.element == expected


def test_four_manifold_class():
    x = FourManifoldClass(BilinearForm([[1]]), orientation=-1)
    assert z4(x).element.is_zero()
    with pytest.raises(NotUnimodular):
        FourManifoldClass(BilinearForm([[3]]))


def _cob(g0, g1, inc):
    return CobordismData(BilinearForm(g0), BilinearForm(g1), Matrix(inc, (len(g1), len(g0))))


def test_cobordism_degree():
    assert cobordism_degree(_cob([[2]], [[2]], [[1]])) == 0
    assert cobordism_degree(_cob([], [[1]], [[]])) == 3
    assert cobordism_degree(_cob([], [[0]], [[]])) == 0


def test_inclusion_must_be_isometric():
    with pytest.raises(InclusionNotIsometric):
        _cob([[2]], [[3]], [[1]])
    with pytest.raises(InclusionNotIsometric):
        CobordismData(BilinearForm([[2]]), BilinearForm([[2]]), Matrix([[1, 0]]))


def test_linking_check():
    assert cobordism_linking_check(_cob([[5]], [[5]], [[1]]))["ok"]
    assert cobordism_linking_check(_cob([[5]], [[5, 0], [0, 1]], [[1], [0]]))["ok"]
    # (5) into diag(5,1) followed by a unimodular change of basis u
    u = Matrix([[1, 0], [-1, 1]])
    g1 = (u.T @ Matrix([[5, 0], [0, 1]]) @ u).tolist()
    rep = cobordism_linking_check(_cob([[5]], g1, [[1], [1]]))
    assert rep["ok"] and rep["lifted"] > 0
