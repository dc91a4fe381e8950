import json
from importlib import resources

import pytest

from quadtmf import tmfcoeff
from quadtmf.errors import OutOfRange, ValidationError


@pytest.fixture(scope="module")
def table():
    return tmfcoeff.load_table()


def test_products(table):
    eta, nu = table.gen("eta"), table.gen("nu")
    sq = table.mul(eta, eta)
    assert str(sq) == "eta^2" and sq.degree == 2
    assert table.mul(nu, table.zero(5)).is_zero()
    assert (eta + eta).is_zero()
    assert table.mul(nu, nu).degree == 6


def test_eta_cubed(table):
    eta = table.gen("eta")
    assert str(table.mul(table.mul(eta, eta), eta)) == "12nu"


def test_unknown_propagates(table):
    u = table.unknown(3, "test")
    assert not u.is_known()
    assert not table.mul(u, table.gen("eta")).is_known()
    assert table.mul(u, table.zero(0)).is_zero()


def test_groups(table):
    assert table.group_at(-1).is_trivial()
    g1 = table.group_at(1)
    assert g1.torsion == (("eta", 2),) and g1.free_rank == 0
    assert table.group_at(0).ring == "Z[j]"
    with pytest.raises(OutOfRange):
        table.group_at(10 ** 6)


def test_table_from_env(tmp_path, monkeypatch):
    data = json.loads(resources.files("quadtmf").joinpath("data/pi_tmf.json").read_text())
    path = tmp_path / "table.json"
    path.write_text(json.dumps(data))
    monkeypatch.setenv(tmfcoeff.TABLE_ENV, str(path))
    assert tmfcoeff.load_table().source == str(path)
    path.write_text("{not json")
    with pytest.raises(ValidationError):
        tmfcoeff.load_table()


def test_validation_lists_every_violation():
    data = json.loads(resources.files("quadtmf").joinpath("data/pi_tmf.json").read_text())
    data["generators"].pop("nu")
    data["generators"].pop("epsilon")
    with pytest.raises(ValidationError) as exc:
        tmfcoeff.TmfCoeffTable(data)
    text = " ".join(exc.value.violations)
    assert "nu" in text and "epsilon" in text
