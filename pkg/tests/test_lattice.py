import importlib
from fractions import Fraction

import numpy as np
import pytest

from quadtmf import lattice
from quadtmf.bilform import named_form
from quadtmf.errors import NotPositiveDefinite
from quadtmf.linalg import Matrix

BACKENDS = ["python"] + (["cython"] if lattice.BACKEND == "cython" else [])


def test_ldl_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        lattice.ldl(Matrix([[1, 0], [0, -1]]))


@pytest.mark.parametrize("backend", BACKENDS)
def test_a1_histogram(backend):
    h = lattice.norm_histogram(Matrix([[2]]), 18, backend=backend)
    assert h == {0: 1, 2: 2, 8: 2, 18: 2}


@pytest.mark.parametrize("backend", BACKENDS)
def test_e8_shells(backend):
    h = lattice.norm_histogram(named_form("E8").gram, 6, backend=backend)
    assert h == {0: 1, 2: 240, 4: 2160, 6: 6720}


@pytest.mark.parametrize("name", ["A2", "D4", "E8"])
def test_backends_agree(name):
    g = named_form(name).gram
    ref = lattice.norm_histogram(g, 8, backend="python")
    for backend in BACKENDS:
        assert lattice.norm_histogram(g, 8, backend=backend) == ref


def test_shifted_histogram():
    # coset Z + 1/2 under norm 2x^2: values 2 (x+1/2)^2
    h = lattice.norm_histogram(Matrix([[2]]), 5, shift=[Fraction(1, 2)])
    assert h == {Fraction(1, 2): 2, Fraction(9, 2): 2}
    for backend in BACKENDS:
        assert lattice.norm_histogram(Matrix([[2]]), 5, [Fraction(1, 2)], backend=backend) == h


def test_short_vectors_and_array_match():
    g = named_form("D4").gram
    vecs = lattice.short_vectors(g, 4)
    coords, norms = lattice.short_vector_array(g, 4)
    assert len(vecs) == len(coords) == 1 + 24 + 24
    for v, n in vecs:
        assert Fraction(n) == sum(v[i] * g[i, j] * v[j] for i in range(4) for j in range(4))
    assert sorted(norms.tolist()) == sorted(int(n) for _, n in vecs)
    assert isinstance(coords, np.ndarray)


@pytest.mark.parametrize("name", ["A2", "D4", "E8"])
def test_split_matches_direct(name):
    g = named_form(name).gram
    assert lattice.theta_counts(g, 6, "split") == lattice.theta_counts(g, 6, "direct")


def test_pure_python_env(monkeypatch):
    monkeypatch.setenv("QUADTMF_PURE_PYTHON", "1")
    mod = importlib.reload(lattice)
    try:
        assert mod.BACKEND == "python"
        assert mod.theta_counts(Matrix([[2]]), 5) == [1, 2, 0, 0, 2]
    finally:
        monkeypatch.delenv("QUADTMF_PURE_PYTHON")
        importlib.reload(lattice)
