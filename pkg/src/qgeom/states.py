"""Density matrices and their scalar geometry."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ContractError, NotPositive, TraceNotOne
from .linalg import as_hermitian, eig_hermitian

STATE_TOL = 1e-10
RANK_RTOL = 1e-9
GROUP_TOL = 1e-9


class SpectrumClass(NamedTuple):
    eigenvalues: np.ndarray  # descending
    rank: int
    multiplicities: tuple[int, ...]


class PurityBounds(NamedTuple):
    purity_lower: float
    purity_upper: float
    r2_lower: float
    r2_upper: float


def validate_state(M, tol: float = STATE_TOL) -> np.ndarray:
    """Return ``M`` as a density matrix or raise the violated constraint.

    The trace is checked before positivity.
    """
    rho = as_hermitian(M)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(tr)
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol:
        raise NotPositive(lam_min)
    return rho


def is_state(M, tol: float = STATE_TOL) -> bool:
    try:
        validate_state(M, tol)
    except (TraceNotOne, NotPositive):
        return False
    return True


def maximally_mixed(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex) / n


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def purity(rho) -> float:
    rho = np.asarray(rho)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def r_squared(rho) -> float:
    return purity(rho) - 1.0 / np.asarray(rho).shape[0]


def purity_bounds(n: int, k: int) -> PurityBounds:
    if not 1 <= k <= n:
        raise ContractError(f"rank k={k} outside 1..{n}")
    return PurityBounds(1.0 / k, 1.0, (n - k) / (n * k), (n - 1) / n)


def spectrum(rho) -> np.ndarray:
    return eig_hermitian(rho)[0]


def _rank_from_eigenvalues(w: np.ndarray, tol: float) -> int:
    top = w[0]
    if top <= 0:
        return 0
    return int(np.count_nonzero(w > tol * top))


def rank_of(rho, tol: float = RANK_RTOL) -> int:
    return _rank_from_eigenvalues(spectrum(rho), tol)


def group_multiplicities(w: np.ndarray, tol: float = GROUP_TOL) -> tuple[int, ...]:
    """Sizes of runs of (descending) eigenvalues closer than ``tol``."""
    sizes = [1]
    for prev, cur in zip(w[:-1], w[1:]):
        if prev - cur <= tol:
            sizes[-1] += 1
        else:
            sizes.append(1)
    return tuple(sizes)


def spectrum_class(rho, tol: float = RANK_RTOL) -> SpectrumClass:
    w = spectrum(rho)
    return SpectrumClass(w, _rank_from_eigenvalues(w, tol), group_multiplicities(w))


def entropy_of_spectrum(w) -> float:
    w = np.asarray(w, dtype=float)
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


def von_neumann_entropy(rho) -> float:
    """S = -Tr(rho ln rho) in nats, with 0 ln 0 = 0."""
    return entropy_of_spectrum(spectrum(rho))
