from fractions import Fraction

import pytest

from quadtmf.bilform import BilinearForm, direct_sum, named_form
from quadtmf.errors import NonUnitLeading, NotEven, NotPositiveDefinite, PreconditionFailed
from quadtmf.qseries import QSeries, delta_series, edge_image, theta_series


def test_arithmetic():
    a = QSeries([1, 1], 0, 5)
    b = QSeries([1, -1], 0, 5)
    assert a * b == QSeries([1, 0, -1], 0, 5)
    inv = b.invert_unit()
    assert [inv[n] for n in range(5)] == [1] * 5
    with pytest.raises(NonUnitLeading):
        QSeries([], 0, 5).invert_unit()


def test_truncation_is_tracked():
    a = QSeries([1, 2, 3], 0, 3)
    assert (a * a.shift(-1)).truncation == 2
    with pytest.raises(IndexError):
        a[3]
    assert (a + QSeries([1], 0, 2)).truncation == 2


def test_delta():
    d = delta_series(50)
    assert d[1] == 1 and d[2] == -24 and d[3] == 252 and d[4] == -1472
    assert d.is_integral() and d.weight == 12
    one = d * d.invert_unit()
    assert one.agrees_with(QSeries.one(one.truncation))


def test_theta_a1():
    th = theta_series(BilinearForm([[2]]), 17)
    assert {n: th[n] for n in range(17) if th[n]} == {0: 1, 1: 2, 4: 2, 9: 2, 16: 2}
    assert th.weight == Fraction(1, 2)


def test_theta_e8():
    th = theta_series(named_form("E8"), 4)
    assert [th[n] for n in range(4)] == [1, 240, 2160, 6720]


def test_theta_multiplicative():
    a1 = BilinearForm([[2]])
    th = theta_series(a1, 12)
    assert theta_series(direct_sum(a1, a1), 12).agrees_with(th * th)


def test_theta_preconditions():
    with pytest.raises(NotEven):
        theta_series(BilinearForm([[1]]), 5)
    with pytest.raises(NotPositiveDefinite):
        theta_series(BilinearForm([[-2]]), 5)


def test_edge_image():
    img = edge_image(named_form("E8"), 4)
    assert [img[n] for n in range(-1, 4)] == [1, 264, 8244, 139520, 1672290]
    assert img.to_json()["conjectural"] is True
    big = edge_image(direct_sum(named_form("E8"), named_form("E8")), 10)
    assert big.agrees_with(edge_image(named_form("D16+"), 10))
    assert big.lowest == -2 and big.weight == -16


@pytest.mark.parametrize("rows, word", [
    ([[1]], "even"),
    ([[2]], "unimodular"),
    ([[-2]], "positive definite"),
])
def test_edge_image_preconditions(rows, word):
    with pytest.raises(PreconditionFailed, match=word):
        edge_image(BilinearForm(rows), 5)


def test_json_round_trip():
    img = edge_image(named_form("E8"), 5)
    back = QSeries.from_json(img.to_json())
    assert back == img and back.weight == img.weight
