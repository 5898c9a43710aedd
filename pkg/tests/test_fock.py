import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from photon_trk import fock
from photon_trk.fock import HilbertSpace
from photon_trk.linalg import DimensionError


def test_annihilation_matrix_elements():
    a = fock.annihilation(4)
    assert np.allclose(a, [[0, 1, 0, 0], [0, 0, np.sqrt(2), 0], [0, 0, 0, np.sqrt(3)], [0, 0, 0, 0]])
    assert np.allclose(fock.creation(4), a.T)
    assert np.allclose(fock.number(4), np.diag([0, 1, 2, 3]))


def test_commutator_edge_defect():
    # [a, a^dag] = 1 except the last diagonal entry, which is 1 - N.
    n = 6
    a = fock.annihilation(n)
    c = a @ a.conj().T - a.conj().T @ a
    assert np.allclose(c, np.diag([1, 1, 1, 1, 1, 1 - n]))


def test_quadratures():
    q, p = fock.quadratures(5)
    assert np.allclose(q, q.conj().T) and np.allclose(p, p.conj().T)
    assert np.isclose(q[0, 1], 1 / np.sqrt(2))
    assert np.isclose(p[1, 0], 1j / np.sqrt(2))
    assert np.allclose(fock.position(5), np.sqrt(2) * q)
    comm = q @ p - p @ q
    assert np.allclose(np.diag(comm)[:-1], 1j)


def test_pauli_conventions():
    sz, sp, sm = fock.pauli("z"), fock.pauli("plus"), fock.pauli("minus")
    g, e = np.array([1, 0]), np.array([0, 1])
    assert np.allclose(sz @ g, -g) and np.allclose(sz @ e, e)
    assert np.allclose(sp @ g, e) and np.allclose(sm @ e, g)
    assert np.allclose(fock.pauli("y"), -1j * (sp - sm))
    assert np.allclose(fock.pauli("x") @ fock.pauli("y"), 1j * sz)
    with pytest.raises(ValueError):
        fock.pauli("w")


def test_truncation_validation():
    for bad in (0, 1, 2.5):
        with pytest.raises(ValueError):
            fock.annihilation(bad)
    with pytest.raises(ValueError):
        HilbertSpace((3, 1))
    with pytest.raises(ValueError):
        HilbertSpace(())


def test_embed_last_fastest():
    space = HilbertSpace((3, 2))
    n = fock.embed(fock.number(3), space, 0)
    sz = fock.embed(fock.pauli("z"), space, 1)
    assert np.allclose(np.diag(n).real, [0, 0, 1, 1, 2, 2])
    assert np.allclose(np.diag(sz).real, [-1, 1, -1, 1, -1, 1])
    with pytest.raises(DimensionError):
        fock.embed(fock.number(2), space, 0)
    with pytest.raises(IndexError):
        fock.embed(fock.number(3), space, 2)


def test_embedded_operators_on_different_subsystems_commute():
    space = HilbertSpace((3, 4, 2))
    a = fock.embed(fock.annihilation(3), space, 0)
    b = fock.embed(fock.annihilation(4), space, 1)
    s = fock.embed(fock.pauli("x"), space, 2)
    for x, y in [(a, b), (a, s), (b, s)]:
        assert np.allclose(x @ y, y @ x)


@given(st.lists(st.integers(2, 5), min_size=1, max_size=4), st.data())
def test_index_digits_roundtrip(dims, data):
    space = HilbertSpace(tuple(dims))
    i = data.draw(st.integers(0, space.total_dim - 1))
    assert space.index(space.digits(i)) == i


def test_index_errors():
    space = HilbertSpace((2, 3))
    with pytest.raises(IndexError):
        space.digits(6)
    with pytest.raises(IndexError):
        space.index((0, 3))
    with pytest.raises(DimensionError):
        space.index((0,))


def test_parity_and_project():
    assert np.allclose(np.diag(fock.photon_parity(4)).real, [1, -1, 1, -1])
    space = HilbertSpace((4, 2))
    n = fock.embed(fock.number(4), space, 0)
    small = fock.project(n, space, (2, 2))
    assert np.allclose(np.diag(small).real, [0, 0, 1, 1])
    with pytest.raises(DimensionError):
        fock.project(n, space, (2,))
