"""Contravariant tensor calculus on the trace-one hyperplane.

Generators are traceless Hermitian matrices ``a``; the anti-Hermitian Lie
algebra element is ``A = i a``.  All field formulas are the t-derivatives at
zero of the flows

    Hamiltonian:    rho(t) = e^{i t a} rho e^{-i t a}
    gradient-like:  rho(t) = e^{t b} rho e^{t b} / Tr(...)

The operator forms below are the computational path; the ``*_matrix``
helpers give the same tensors as component arrays in the orthonormal
Gell-Mann chart and are used as a cross-check.
"""

from __future__ import annotations

import numpy as np

from .basis import SuBasisData, components, gellmann_basis
from .errors import ContractError
from .linalg import anticommutator, as_hermitian, commutator

TRACELESS_TOL = 1e-12


def generator(a) -> np.ndarray:
    """Validate a traceless Hermitian generator."""
    A = as_hermitian(a)
    tr = np.trace(A)
    if abs(tr) > TRACELESS_TOL * (1.0 + float(np.max(np.abs(A), initial=0.0))):
        raise ContractError(f"generator must be traceless, Tr a = {tr:.3e}")
    return A


def expectation(a, rho) -> float:
    return float(np.trace(np.asarray(a) @ np.asarray(rho)).real)


def poisson_eval(a, b, rho) -> float:
    """Lambda(df_a, df_b)(rho) = Tr(rho (-i)[a, b])."""
    a, b = generator(a), generator(b)
    return float(np.trace(np.asarray(rho) @ (-1j * commutator(a, b))).real)


def r_tensor_eval(a, b, rho) -> float:
    """R(df_a, df_b)(rho) = Tr(rho {a, b}) - 2 Tr(a rho) Tr(b rho); 2 x covariance."""
    a, b = generator(a), generator(b)
    rho = np.asarray(rho)
    return float(np.trace(rho @ anticommutator(a, b)).real - 2.0 * expectation(a, rho) * expectation(b, rho))


def hamiltonian_field(a, rho) -> np.ndarray:
    """i[a, rho]."""
    a = generator(a)
    return 1j * commutator(a, np.asarray(rho))


def gradient_like_field(b, rho) -> np.ndarray:
    """{b, rho} - 2 Tr(b rho) rho; rank-preserving, not isospectral."""
    b = generator(b)
    rho = np.asarray(rho)
    return anticommutator(b, rho) - 2.0 * expectation(b, rho) * rho


def euclid_metric_eval(v, w) -> float:
    """N(v, w) = Tr(v w) for tangent (traceless Hermitian) vectors."""
    return float(np.trace(np.asarray(v) @ np.asarray(w)).real)


def jj_apply(X, rho, basis: SuBasisData | None = None) -> np.ndarray:
    """The (1,1) tensor N o Lambda: X -> sum_j Tr(h_j X) L^j(rho).

    The result is a combination of Hamiltonian fields, hence tangent to the
    isospectral orbit through ``rho``.
    """
    rho = np.asarray(rho, dtype=complex)
    basis = basis or gellmann_basis(rho.shape[0])
    coeffs = components(X, basis)
    out = np.zeros_like(rho)
    for xj, hj in zip(coeffs, basis.h):
        if xj != 0.0:
            out += xj * (1j * commutator(hj, rho))
    return out


def gg_eval(a, b, rho) -> float:
    """G(df_a, df_b) = N(X^a, X^b) = Tr(i[a, rho] i[b, rho]); symmetric, PSD."""
    return euclid_metric_eval(hamiltonian_field(a, rho), hamiltonian_field(b, rho))


# -- component arrays in the orthonormal chart ------------------------------

def poisson_matrix(rho, basis: SuBasisData | None = None) -> np.ndarray:
    """Lambda^{jk} = c[j, k, l] x_l."""
    rho = np.asarray(rho)
    basis = basis or gellmann_basis(rho.shape[0])
    return np.einsum("jkl,l->jk", basis.c, components(rho, basis))


def r_matrix(rho, basis: SuBasisData | None = None) -> np.ndarray:
    """R^{jk} = d[j, k, l] x_l + 2 delta_jk / n - 2 x_j x_k."""
    rho = np.asarray(rho)
    basis = basis or gellmann_basis(rho.shape[0])
    x = components(rho, basis)
    return np.einsum("jkl,l->jk", basis.d, x) + (2.0 / basis.n) * np.eye(basis.dim) - 2.0 * np.outer(x, x)


def hamiltonian_components(rho, basis: SuBasisData | None = None) -> np.ndarray:
    """Row j holds the chart components of L^j = i[h_j, rho]."""
    rho = np.asarray(rho)
    basis = basis or gellmann_basis(rho.shape[0])
    return np.array([components(1j * commutator(hj, rho), basis) for hj in basis.h])


def gg_matrix(rho, basis: SuBasisData | None = None) -> np.ndarray:
    """G^{jk} = sum_m L^m_j L^m_k."""
    L = hamiltonian_components(rho, basis)
    return L.T @ L
