"""Random matrices and states driven by an explicit ``numpy`` Generator."""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .linalg import expm


def ginibre(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_state(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Induced-measure state G G^dagger / Tr with G of shape (n, rank)."""
    G = ginibre((n, rank or n), rng)
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_states(count: int, n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    G = ginibre((count, n, rank), rng)
    rho = G @ G.conj().transpose(0, 2, 1)
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]


def random_pure(n: int, rng: np.random.Generator) -> np.ndarray:
    psi = ginibre(n, rng)
    return psi / np.linalg.norm(psi)


def random_unitary(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar unitary (or a stack of ``size`` of them)."""
    U = unitary_group.rvs(n, size=size or 1, random_state=rng)
    return U if size else U.reshape(n, n)


def random_traceless_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    M = ginibre((n, n), rng)
    H = (M + M.conj().T) / 2
    H -= np.trace(H).real / n * np.eye(n)
    return scale * H / np.linalg.norm(H)


def random_sl(n: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """exp of a random traceless complex matrix; det = 1 up to rounding."""
    M = ginibre((n, n), rng)
    M -= np.trace(M) / n * np.eye(n)
    return expm(scale * M / np.linalg.norm(M))


def random_spectrum(n: int, rng: np.random.Generator, min_gap: float = 0.0) -> np.ndarray:
    """Descending probability vector with consecutive gaps >= min_gap."""
    if min_gap * (n - 1) * n / 2 >= 1.0:
        raise ValueError(f"min_gap {min_gap} too large for n={n}")
    # lam_k = base_k + min_gap * (n - k): gaps are at least min_gap
    offsets = min_gap * np.arange(n - 1, -1, -1)
    base = np.sort(rng.dirichlet(np.ones(n)))[::-1] * (1.0 - offsets.sum())
    return base + offsets


def random_nondegenerate_state(n: int, rng: np.random.Generator, min_gap: float = 0.05) -> np.ndarray:
    w = random_spectrum(n, rng, min_gap)
    U = random_unitary(n, rng)
    return (U * w) @ U.conj().T
