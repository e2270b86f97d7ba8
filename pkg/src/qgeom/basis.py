"""Orthonormal generalized Gell-Mann bases and the trace-one coordinate chart.

Convention used throughout the package: ``h_j`` are traceless Hermitian with
``Tr(h_j h_k) = delta_jk``, and

    [h_j, h_k] = i c[j, k, l] h_l
    {h_j, h_k} = d[j, k, l] h_l + (2 delta_jk / n) I

Coordinates of a trace-one Hermitian ``xi`` are ``x_j = Tr(h_j xi)``, so
``xi = I/n + sum_j x_j h_j``.  For qubits ``h_j = sigma_j / sqrt(2)``; the
Bloch coordinates of :mod:`qgeom.qubit` are ``sqrt(2)`` times these.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContractError, DimensionError
from .linalg import as_hermitian

TRACE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SuBasisData:
    n: int
    h: np.ndarray  # (n^2 - 1, n, n)
    h0: np.ndarray
    c: np.ndarray  # (m, m, m), antisymmetric part
    d: np.ndarray  # (m, m, m), symmetric part

    @property
    def dim(self) -> int:
        return self.n * self.n - 1

    def identity_coefficient(self, j: int, k: int) -> float:
        """Coefficient of I in {h_j, h_k}; exactly 2 delta_jk / n."""
        return 2.0 / self.n if j == k else 0.0


def _gellmann_matrices(n: int) -> list[np.ndarray]:
    # Order: for each k = 2..n the symmetric/antisymmetric pairs (j, k),
    # j < k, then the k-1'th diagonal element.  Reproduces Pauli (n=2)
    # and the standard Gell-Mann lambda_1..lambda_8 (n=3).
    mats = []
    for k in range(1, n):
        for j in range(k):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            mats.extend([s, a])
        diag = np.zeros(n)
        diag[:k] = 1.0
        diag[k] = -k
        mats.append(np.diag(np.sqrt(2.0 / (k * (k + 1))) * diag).astype(complex))
    return [m / np.sqrt(2.0) for m in mats]


@lru_cache(maxsize=16)
def gellmann_basis(n: int) -> SuBasisData:
    if int(n) != n or n < 2:
        raise DimensionError(f"Hilbert dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    h = np.array(_gellmann_matrices(n))
    comm = np.einsum("jab,kbc->jkac", h, h)
    anti = comm + comm.transpose(1, 0, 2, 3)
    comm = comm - comm.transpose(1, 0, 2, 3)
    # c_jkl = -i Tr([h_j, h_k] h_l), d_jkl = Tr({h_j, h_k} h_l)
    c = (-1j * np.einsum("jkab,lba->jkl", comm, h)).real
    d = np.einsum("jkab,lba->jkl", anti, h).real
    for arr in (h, c, d):
        arr.setflags(write=False)
    h0 = np.eye(n, dtype=complex) / np.sqrt(n)
    h0.setflags(write=False)
    return SuBasisData(n=n, h=h, h0=h0, c=c, d=d)


def _basis_for(n: int, basis: SuBasisData | None) -> SuBasisData:
    if basis is None:
        return gellmann_basis(n)
    if basis.n != n:
        raise DimensionError(f"basis is for n={basis.n}, matrix has n={n}")
    return basis


def components(v, basis: SuBasisData) -> np.ndarray:
    """Coefficients ``Tr(h_j v)`` of any square matrix in the traceless basis."""
    V = np.asarray(v, dtype=complex)
    return np.einsum("jab,ba->j", basis.h, V).real


def to_coordinates(xi, basis: SuBasisData | None = None) -> np.ndarray:
    X = as_hermitian(xi)
    tr = np.trace(X).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ContractError(f"trace is {tr!r}; coordinates are defined on the trace-one hyperplane")
    return components(X, _basis_for(X.shape[0], basis))


def from_coordinates(x, basis: SuBasisData) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.dim,):
        raise DimensionError(f"expected {basis.dim} coordinates, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ContractError("coordinates must be finite")
    return np.eye(basis.n, dtype=complex) / basis.n + np.einsum("j,jab->ab", x, basis.h)


def vector_from_components(v, basis: SuBasisData) -> np.ndarray:
    """Traceless Hermitian matrix ``sum_j v_j h_j``."""
    return np.einsum("j,jab->ab", np.asarray(v, dtype=float), basis.h)
