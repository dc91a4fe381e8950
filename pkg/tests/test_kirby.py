import random

import pytest

from quadtmf.bilform import BilinearForm
from quadtmf.errors import IllegalMove, InputError
from quadtmf.kirby import (BlowDown, BlowUp, FramedLink, HandleSlide, apply_move, apply_moves, gram, move_from_json,
                           random_moves, verify_boundary_invariance)
from quadtmf.linalg import Matrix


def test_gram_examples():
    assert gram(FramedLink.unknot(3)) == BilinearForm([[3]])
    assert gram(FramedLink.unlink([0, 0, 0])).gram == Matrix.zeros(3, 3)
    assert gram(FramedLink([])).rank == 0


def test_blowup_and_down():
    link = apply_move(FramedLink([]), BlowUp(1))
    assert gram(link) == BilinearForm([[1]])
    assert apply_move(link, BlowDown(0)) == FramedLink([])


def test_blowdown_legality():
    with pytest.raises(IllegalMove):
        apply_move(FramedLink.unknot(2), BlowDown(0))
    with pytest.raises(IllegalMove):
        apply_move(FramedLink.hopf(1, 0), BlowDown(0))


def test_slides():
    zero = FramedLink.unlink([0, 0])
    assert apply_move(zero, HandleSlide(0, 1, 1)) == zero
    slid = apply_move(FramedLink.hopf(0, 0), HandleSlide(0, 1, 1))
    assert gram(slid).gram == Matrix([[2, 1], [1, 0]])
    back = apply_move(slid, HandleSlide(0, 1, -1))
    assert back == FramedLink.hopf(0, 0)
    with pytest.raises(IllegalMove):
        apply_move(zero, HandleSlide(0, 0, 1))


def test_moves_preserve_abs_det():
    rng = random.Random(3)
    link = FramedLink.from_gram(Matrix([[2, 1, 0], [1, -1, 2], [0, 2, 3]]))
    det = abs(gram(link).det)
    for m in random_moves(link, 20, rng):
        link = apply_move(link, m)
        assert abs(gram(link).det) == det


def test_report_for_blowup():
    rep = verify_boundary_invariance(FramedLink.unknot(2), [BlowUp(1)])
    assert rep["discriminant_preserved"] and rep["z3_preserved"]


def test_moves_json_is_one_based():
    moves = [BlowUp(-1), HandleSlide(0, 1, 1), BlowDown(2)]
    data = [m.to_json() for m in moves]
    assert data == [{"blowup": -1}, {"slide": [1, 2, 1]}, {"blowdown": 3}]
    assert [move_from_json(d) for d in data] == moves
    with pytest.raises(InputError):
        move_from_json({"twist": 1})


def test_link_json_round_trip():
    link = FramedLink.hopf(2, -1)
    assert FramedLink.from_json(link.to_json()) == link
    assert apply_moves(link, []) == link
