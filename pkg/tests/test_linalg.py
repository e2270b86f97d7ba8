import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from qgeom.errors import DimensionError, NotHermitian, NumericalError
from qgeom.linalg import (
    as_hermitian,
    commutator,
    eig_hermitian,
    expm,
    kron,
    partial_trace,
    partial_transpose,
)


def _rand(n, seed):
    r = np.random.default_rng(seed)
    return r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))


def test_as_hermitian_rejects_and_symmetrizes():
    with pytest.raises(NotHermitian):
        as_hermitian([[1, 1], [0, 1]])
    M = np.array([[1, 1 + 1e-14], [1, 2]], dtype=complex)
    H = as_hermitian(M)
    assert np.array_equal(H, H.conj().T)


def test_shape_and_finiteness_errors():
    with pytest.raises(DimensionError):
        as_hermitian(np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        as_hermitian(np.zeros(3))
    with pytest.raises(NumericalError):
        as_hermitian([[np.nan, 0], [0, 1]])


def test_eig_hermitian_descending_and_reconstructs():
    A = _rand(5, 1)
    H = (A + A.conj().T) / 2
    w, V = eig_hermitian(H)
    assert np.all(np.diff(w) <= 0)
    assert np.allclose(V @ np.diag(w) @ V.conj().T, H, atol=1e-12)
    assert np.allclose(V.conj().T @ V, np.eye(5), atol=1e-12)


def test_eig_hermitian_stable_on_degenerate_diagonal():
    w, V = eig_hermitian(np.diag([0.25, 0.5, 0.25]))
    assert np.allclose(w, [0.5, 0.25, 0.25])
    assert np.allclose(np.abs(V), np.eye(3)[:, [1, 0, 2]])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10_000))
def test_expm_matches_scipy_for_general_hermitian_and_antihermitian(n, seed):
    A = _rand(n, seed)
    H = (A + A.conj().T) / 2
    for M in (A, H, 1j * H, 0.1 * A):
        ref = scipy.linalg.expm(M)
        assert np.allclose(expm(M), ref, rtol=1e-10, atol=1e-10 * np.abs(ref).max())


def test_expm_unitary_exactly_unitary():
    A = _rand(4, 3)
    U = expm(1j * (A + A.conj().T))
    assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-13)


def test_commutator_of_paulis():
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1, -1])
    assert np.allclose(commutator(sx, sy), 2j * sz)


def _partial_trace_loop(M, na, nb, keep):
    if keep == "A":
        out = np.zeros((na, na), dtype=complex)
        for i in range(na):
            for k in range(na):
                out[i, k] = sum(M[i * nb + j, k * nb + j] for j in range(nb))
    else:
        out = np.zeros((nb, nb), dtype=complex)
        for j in range(nb):
            for l in range(nb):
                out[j, l] = sum(M[i * nb + j, i * nb + l] for i in range(na))
    return out


@pytest.mark.parametrize("na,nb", [(2, 2), (2, 3), (3, 2), (1, 4)])
def test_partial_trace_against_loop(na, nb):
    M = _rand(na * nb, na + 10 * nb)
    for keep in ("A", "B"):
        assert np.allclose(partial_trace(M, (na, nb), keep), _partial_trace_loop(M, na, nb, keep))


def test_partial_trace_of_kron():
    r = np.random.default_rng(0)
    A, B = r.standard_normal((2, 2)), r.standard_normal((3, 3))
    K = kron(A, B)
    assert np.allclose(partial_trace(K, (2, 3), "A"), A * np.trace(B))
    assert np.allclose(partial_trace(K, (2, 3), "B"), B * np.trace(A))


def test_partial_transpose_of_kron():
    r = np.random.default_rng(1)
    A, B = _rand(2, 4), _rand(3, 5)
    K = kron(A, B)
    assert np.allclose(partial_transpose(K, (2, 3), "B"), np.kron(A, B.T))
    assert np.allclose(partial_transpose(K, (2, 3), "A"), np.kron(A.T, B))
    del r


def test_bipartite_dim_mismatch():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4), (2, 3))
