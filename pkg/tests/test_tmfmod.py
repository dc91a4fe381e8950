import pytest

from quadtmf.bilform import BilinearForm, named_form
from quadtmf.errors import ShapeMismatch, UnknownName
from quadtmf.tmfcoeff import default_table
from quadtmf.tmfmod import (TmfMap, builtin_map, compose, cone_nu, direct_sum, expr_from_json, from_bilinear,
                            s2xs2_composite, tensor, tmf)


def test_from_bilinear_examples():
    assert from_bilinear(BilinearForm.empty()) == tmf()
    assert from_bilinear(BilinearForm.diag([1, 1])) == tmf(-6)
    assert from_bilinear(BilinearForm([[2]])) == cone_nu(-5)
    assert from_bilinear(BilinearForm([[0]])) == direct_sum(tmf(), tmf(-1))
    assert from_bilinear(named_form("E8")) == tmf(-24)


def test_duals():
    assert tmf(5).dual() == tmf(-5)
    assert direct_sum(tmf(), tmf(-1)).dual() == direct_sum(tmf(), tmf(1))
    assert cone_nu(-5).dual() == cone_nu(1)
    x = tensor(cone_nu(2), direct_sum(tmf(), tmf(3)))
    assert x.dual().dual() == x


def test_opaque_round_trip():
    m = from_bilinear(BilinearForm([[4, 1], [1, 4]]))
    assert m.normal_form().has_opaque
    assert m.dual().dual() == m
    assert expr_from_json(m.normal_form().to_json()) == m


def test_compose_identity():
    f = builtin_map("restriction_L0")
    assert compose(TmfMap.identity(f.target), f) == f
    assert compose(f, TmfMap.identity(f.source)) == f


def test_restriction_after_transfer_is_zero():
    res = builtin_map("restriction_L0")
    t = default_table()
    col = TmfMap((1,), (0, 1), [[t.gen("eta")], [t.one()]], 0, t)
    assert compose(res, col).scalar().is_zero()


def test_builtin_maps():
    r = builtin_map("restriction_L0")
    assert (r.source, r.target) == ((0, 1), (0,))
    assert [str(x) for x in r.matrix[0]] == ["1", "eta"]
    d = builtin_map("duality_L0")
    assert [[str(x) for x in row] for row in d.matrix] == [["0", "1"], ["1", "eta"]]
    tr = builtin_map("transfer_L0")
    assert [str(row[0]) for row in tr.matrix] == ["eta", "1"]
    with pytest.raises(UnknownName):
        builtin_map("nope")


@pytest.mark.parametrize("sign", [1, -1])
def test_s2xs2_composite(sign):
    assert str(s2xs2_composite(sign).scalar()) == "eta"


def test_shape_mismatch():
    r = builtin_map("restriction_L0")
    with pytest.raises(ShapeMismatch):
        compose(r, r)
    t = default_table()
    with pytest.raises(ShapeMismatch):
        TmfMap((0,), (0,), [[t.gen("eta")]], 0, t)
