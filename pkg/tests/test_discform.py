from fractions import Fraction

from quadtmf.bilform import BilinearForm, direct_sum, hyperbolic, named_form
from quadtmf.decision import Decision
from quadtmf.discform import TorsionLinkingForm, discriminant, pm_equivalent, torsion_forms_isomorphic


def test_discriminant_examples():
    d = discriminant(BilinearForm([[5]]))
    assert d.free_rank == 0 and d.invariant_factors == (5,)
    assert d.torsion_form.value((1,), (1,)) == Fraction(1, 5)
    d = discriminant(BilinearForm([[0]]))
    assert d.free_rank == 1 and d.order == 1
    assert discriminant(BilinearForm.diag([1, -1])).torsion_form.is_trivial()
    assert discriminant(named_form("E8")).order == 1


def test_discriminant_order_is_det():
    for rows in ([[2, 1], [1, 2]], [[4, 0], [0, 6]], [[2, 1, 0], [1, 2, 1], [0, 1, 2]]):
        b = BilinearForm(rows)
        assert discriminant(b).order == abs(b.det)


def test_cyclic_isomorphism():
    a = TorsionLinkingForm.cyclic(5, Fraction(1, 5))
    assert torsion_forms_isomorphic(a, TorsionLinkingForm.cyclic(5, Fraction(4, 5))) is Decision.YES
    assert torsion_forms_isomorphic(a, TorsionLinkingForm.cyclic(5, Fraction(2, 5))) is Decision.NO
    assert torsion_forms_isomorphic(a, a) is Decision.YES
    assert torsion_forms_isomorphic(a, TorsionLinkingForm.cyclic(7, Fraction(1, 7))) is Decision.NO


def test_torsion_json_round_trip():
    t = discriminant(BilinearForm([[2, 1], [1, 3]])).torsion_form
    assert TorsionLinkingForm.from_json(t.to_json()) == t


def test_pm_equivalent_examples():
    assert pm_equivalent(hyperbolic(), BilinearForm.diag([1, -1])) is Decision.YES
    other = BilinearForm([[2, 1], [1, 3]])
    assert discriminant(other).torsion_form.value((1,), (1,)) in (Fraction(2, 5), Fraction(3, 5))
    assert pm_equivalent(BilinearForm([[5]]), other) is Decision.NO
    b = BilinearForm([[2, 1], [1, 4]])
    assert pm_equivalent(b, direct_sum(b, BilinearForm([[1]]), BilinearForm([[-1]]))) is Decision.YES
    assert pm_equivalent(BilinearForm([[0]]), BilinearForm.empty()) is Decision.NO


def test_pm_equivalent_ignores_sign():
    b = BilinearForm([[2, 1], [1, 3]])
    assert pm_equivalent(b, -b) is Decision.YES
