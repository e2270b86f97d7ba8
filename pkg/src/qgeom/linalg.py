"""Dense complex matrix primitives.

Matrices are plain ``numpy`` arrays.  Hermitian inputs are checked against a
relative tolerance of ``HERMITIAN_RTOL`` when they enter the package through
:func:`as_hermitian`.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotHermitian, NumericalError

HERMITIAN_RTOL = 1e-12


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-d complex array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    return A


def as_square(M) -> np.ndarray:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def hermiticity_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T), initial=0.0))


def is_hermitian(M, rtol: float = HERMITIAN_RTOL) -> bool:
    A = as_square(M)
    return hermiticity_defect(A) <= rtol * (1.0 + float(np.max(np.abs(A), initial=0.0)))


def as_hermitian(M, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate ``M`` as Hermitian and return its exactly symmetrized copy."""
    A = as_square(M)
    scale = 1.0 + float(np.max(np.abs(A), initial=0.0))
    defect = hermiticity_defect(A)
    if defect > rtol * scale:
        raise NotHermitian(f"max |M - M^dagger| = {defect:.3e} exceeds {rtol:.0e} x {scale:.3g}")
    return hermitian_part(A)


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


def dagger(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def anticommutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B + B @ A


def eig_hermitian(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Ties keep LAPACK's order (stable sort), so a diagonal input with a
    repeated eigenvalue returns the identity as eigenvector matrix.
    """
    A = as_hermitian(M)
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigh failed to converge (||M||_F = {np.linalg.norm(A):.3e})"
        ) from exc
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def _eig_exp(M: np.ndarray) -> np.ndarray | None:
    scale = 1.0 + float(np.max(np.abs(M), initial=0.0))
    tol = HERMITIAN_RTOL * scale
    if hermiticity_defect(M) <= tol:
        w, V = np.linalg.eigh(hermitian_part(M))
        return (V * np.exp(w)) @ V.conj().T
    if float(np.max(np.abs(M + M.conj().T), initial=0.0)) <= tol:
        # M = iH with H Hermitian
        H = hermitian_part(-1j * M)
        w, V = np.linalg.eigh(H)
        return (V * np.exp(1j * w)) @ V.conj().T
    return None


def expm(M) -> np.ndarray:
    """Matrix exponential.

    Hermitian and anti-Hermitian inputs go through the eigendecomposition;
    everything else uses scaling and squaring with a degree-13 Pade
    approximant (``scipy.linalg.expm``).
    """
    A = as_square(M)
    E = _eig_exp(A)
    if E is not None:
        return E
    return scipy.linalg.expm(A)


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def _check_bipartite(M: np.ndarray, dims) -> tuple[int, int]:
    n_a, n_b = (int(d) for d in dims)
    if n_a < 1 or n_b < 1:
        raise DimensionError(f"invalid dims {dims}")
    if M.shape != (n_a * n_b, n_a * n_b):
        raise DimensionError(f"matrix of shape {M.shape} does not factor as {n_a}x{n_b}")
    return n_a, n_b


def partial_trace(M, dims, keep: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    ``keep="A"`` returns Tr_B(M), ``keep="B"`` returns Tr_A(M).  Index
    convention matches :func:`numpy.kron`: row index ``i * n_B + j``.
    """
    A = as_square(M)
    n_a, n_b = _check_bipartite(A, dims)
    T = A.reshape(n_a, n_b, n_a, n_b)
    if keep == "A":
        return np.einsum("ijkj->ik", T)
    if keep == "B":
        return np.einsum("ijil->jl", T)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(M, dims, sys: str = "B") -> np.ndarray:
    A = as_square(M)
    n_a, n_b = _check_bipartite(A, dims)
    T = A.reshape(n_a, n_b, n_a, n_b)
    if sys == "B":
        T = T.transpose(0, 3, 2, 1)
    elif sys == "A":
        T = T.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"sys must be 'A' or 'B', got {sys!r}")
    return T.reshape(n_a * n_b, n_a * n_b)
