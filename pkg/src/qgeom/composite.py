"""Bipartite states: Schmidt rank, product structure, local SL action, separability."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ContractError, DimensionError, NotProduct, RankMismatch
from .flows import sl_act, sl_normalize
from .linalg import as_hermitian, eig_hermitian, kron, partial_trace, partial_transpose
from .states import RANK_RTOL, purity, rank_of

PRODUCT_TOL = 1e-9
PPT_TOL = -1e-10
ABS_SEP_TOL = 1e-12
BALL_TOL = 1e-12


class ABRank(NamedTuple):
    k_a: int
    k_b: int


class SchmidtDecomposition(NamedTuple):
    rank: int
    coefficients: np.ndarray  # descending, all n_A/n_B singular values


def parse_dims(dims) -> tuple[int, int]:
    """Accept (n_A, n_B) or a string like "2x3"."""
    if isinstance(dims, str):
        try:
            n_a, n_b = (int(p) for p in dims.lower().split("x"))
        except ValueError as exc:
            raise DimensionError(f"cannot parse dims {dims!r}; expected e.g. '2x2'") from exc
    else:
        n_a, n_b = (int(d) for d in dims)
    if n_a < 1 or n_b < 1:
        raise DimensionError(f"invalid dims ({n_a}, {n_b})")
    return n_a, n_b


def _check_state_dims(rho: np.ndarray, dims) -> tuple[int, int]:
    n_a, n_b = parse_dims(dims)
    if rho.shape != (n_a * n_b, n_a * n_b):
        raise DimensionError(f"state of shape {rho.shape} does not factor as {n_a}x{n_b}")
    return n_a, n_b


def schmidt_rank(psi, dims, tol: float = RANK_RTOL) -> SchmidtDecomposition:
    psi = np.asarray(psi, dtype=complex).ravel()
    n_a, n_b = parse_dims(dims)
    if psi.size != n_a * n_b:
        raise DimensionError(f"vector of length {psi.size} does not factor as {n_a}x{n_b}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-10:
        raise ContractError(f"state vector must be normalized, |psi| = {norm!r}")
    s = np.linalg.svd(psi.reshape(n_a, n_b), compute_uv=False)
    return SchmidtDecomposition(int(np.count_nonzero(s > tol * s[0])), s)


def marginals(rho, dims) -> tuple[np.ndarray, np.ndarray]:
    rho = as_hermitian(rho)
    dims = _check_state_dims(rho, dims)
    return partial_trace(rho, dims, keep="A"), partial_trace(rho, dims, keep="B")


def product_defect(rho, dims) -> float:
    rho_a, rho_b = marginals(rho, dims)
    return float(np.linalg.norm(np.asarray(rho) - np.kron(rho_a, rho_b)))


def is_product(rho, dims, tol: float = PRODUCT_TOL) -> bool:
    return product_defect(rho, dims) <= tol


def ab_rank(rho, dims, tol: float = PRODUCT_TOL) -> ABRank:
    if not is_product(rho, dims, tol):
        raise NotProduct(f"state is not a product (defect {product_defect(rho, dims):.3e})")
    rho_a, rho_b = marginals(rho, dims)
    return ABRank(rank_of(rho_a), rank_of(rho_b))


def local_sl_act(g_a, g_b, rho) -> np.ndarray:
    return sl_act(kron(g_a, g_b), rho)


def _factor_transporter(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """g with g src g^dagger proportional to dst, for equal-rank factors."""
    w, U = eig_hermitian(src)
    w2, U2 = eig_hermitian(dst)
    k = rank_of(src)
    if rank_of(dst) != k:
        raise RankMismatch(f"factor ranks differ: {k} vs {rank_of(dst)}")
    scale = np.ones(len(w))
    scale[:k] = np.sqrt(w2[:k] / w[:k])
    # kernel of src goes to kernel of dst with unit scale
    return sl_normalize((U2 * scale) @ U.conj().T)


def product_transporter(rho, rho_target, dims) -> tuple[np.ndarray, np.ndarray]:
    """Local (g_A, g_B) in SL x SL carrying one product state onto another."""
    r1, r2 = ab_rank(rho, dims), ab_rank(rho_target, dims)
    if r1 != r2:
        raise RankMismatch(f"(A,B)-ranks differ: {tuple(r1)} vs {tuple(r2)}")
    a1, b1 = marginals(rho, dims)
    a2, b2 = marginals(rho_target, dims)
    return _factor_transporter(a1, a2), _factor_transporter(b1, b2)


def ppt_test(rho, dims, tol: float = PPT_TOL) -> tuple[bool, float]:
    """Positivity of the partial transpose on factor B."""
    rho = as_hermitian(rho)
    dims = _check_state_dims(rho, dims)
    lam_min = float(np.linalg.eigvalsh(partial_transpose(rho, dims, sys="B"))[0])
    return lam_min >= tol, lam_min


def separable_ball_test(rho, dims) -> bool:
    """Tr rho^2 <= 1/(N-1): every state with this spectrum is separable."""
    rho = as_hermitian(rho)
    n_a, n_b = _check_state_dims(rho, dims)
    N = n_a * n_b
    if N < 2:
        return True
    return purity(rho) <= 1.0 / (N - 1) + BALL_TOL


def absolutely_separable_2q(spectrum) -> bool:
    """lam_1 - lam_3 <= 2 sqrt(lam_2 lam_4) for a two-qubit spectrum."""
    lam = np.sort(np.asarray(spectrum, dtype=float))[::-1]
    if lam.shape != (4,):
        raise DimensionError(f"two-qubit spectrum needs 4 eigenvalues, got {lam.size}")
    l1, l2, l3, l4 = lam
    return l1 - l3 - 2.0 * np.sqrt(max(l2 * l4, 0.0)) <= ABS_SEP_TOL
