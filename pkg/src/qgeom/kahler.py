"""Kahler structure of isospectral orbits.

Tangent vectors at ``rho`` are traceless Hermitian matrices ``v = i[a, rho]``.
Everything is computed in the eigenbasis of ``rho`` (descending eigenvalues)
with eigenvalues grouped into degenerate blocks; inside a block all
coefficients vanish, so the results do not depend on the eigenbasis chosen
within a block.

In the eigenbasis the complex structure is entrywise multiplication,
``J(v)_kl = i sign(lam_k - lam_l) v_kl``, and the metric is

    g(v, w) = sum_{k != l} |lam_k - lam_l| Re(a_kl conj(b_kl)) = omega(J v, w)

with ``a``, ``b`` the canonical generators of ``v``, ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BaseMismatch, NonTangent
from .linalg import as_hermitian, commutator, eig_hermitian
from .states import GROUP_TOL
from .tensors import expectation, generator, hamiltonian_field

TANGENT_TOL = 1e-10


def _block_labels(w: np.ndarray, tol: float) -> np.ndarray:
    labels = np.zeros(len(w), dtype=int)
    for i in range(1, len(w)):
        labels[i] = labels[i - 1] + (w[i - 1] - w[i] > tol)
    return labels


@dataclass(frozen=True, eq=False)
class OrbitPoint:
    """A point of an isospectral orbit with its cached eigendecomposition."""

    rho: np.ndarray
    eigenvalues: np.ndarray = field(init=False)
    eigenvectors: np.ndarray = field(init=False)
    blocks: np.ndarray = field(init=False)
    group_tol: float = GROUP_TOL

    def __post_init__(self):
        rho = as_hermitian(self.rho)
        w, V = eig_hermitian(rho)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", V)
        object.__setattr__(self, "blocks", _block_labels(w, self.group_tol))

    @property
    def n(self) -> int:
        return self.rho.shape[0]

    @property
    def degeneracy(self) -> tuple[int, ...]:
        return tuple(np.bincount(self.blocks).tolist())

    @property
    def gaps(self) -> np.ndarray:
        """|lam_k - lam_l|, zeroed inside degenerate blocks."""
        w = self.eigenvalues
        G = np.abs(w[:, None] - w[None, :])
        G[self.blocks[:, None] == self.blocks[None, :]] = 0.0
        return G

    @property
    def signs(self) -> np.ndarray:
        w = self.eigenvalues
        S = np.sign(w[:, None] - w[None, :])
        S[self.blocks[:, None] == self.blocks[None, :]] = 0.0
        return S

    def to_eigenbasis(self, M) -> np.ndarray:
        V = self.eigenvectors
        return V.conj().T @ np.asarray(M) @ V

    def from_eigenbasis(self, M) -> np.ndarray:
        V = self.eigenvectors
        return V @ M @ V.conj().T

    def tangent(self, v, tol: float = TANGENT_TOL) -> "Tangent":
        return Tangent(v, self, tol)

    def same_as(self, other: "OrbitPoint") -> bool:
        return other is self or np.allclose(other.rho, self.rho, rtol=0.0, atol=1e-12)


class Tangent:
    """A tangent vector to the orbit through ``base``; validated on construction."""

    __slots__ = ("v", "base")

    def __init__(self, v, base: OrbitPoint, tol: float = TANGENT_TOL):
        v = as_hermitian(v)
        vt = base.to_eigenbasis(v)
        same = base.blocks[:, None] == base.blocks[None, :]
        leak = float(np.max(np.abs(vt[same]), initial=0.0))
        if leak > tol * max(1.0, float(np.max(np.abs(v), initial=0.0))):
            raise NonTangent(f"vector has block-diagonal component {leak:.3e} in the eigenbasis")
        self.v = v
        self.base = base

    def __repr__(self):
        return f"Tangent(n={self.base.n}, |v|={np.linalg.norm(self.v):.3g})"


def _common_base(v: Tangent, w: Tangent) -> OrbitPoint:
    if not v.base.same_as(w.base):
        raise BaseMismatch("tangent vectors live at different base points")
    return v.base


def _generator_eigen(t: Tangent) -> np.ndarray:
    p = t.base
    w = p.eigenvalues
    diff = w[None, :] - w[:, None]  # lam_l - lam_k
    vt = p.to_eigenbasis(t.v)
    off = p.gaps > 0
    at = np.zeros_like(vt)
    at[off] = -1j * vt[off] / diff[off]
    return at


def tangent_generator(t: Tangent) -> np.ndarray:
    """Canonical generator ``a`` with ``i[a, rho] = v`` and no block-diagonal part."""
    p = t.base
    return p.from_eigenbasis(_generator_eigen(t))


def omega(v: Tangent, w: Tangent) -> float:
    """omega(i[a, rho], i[b, rho]) = i Tr(rho [b, a])."""
    p = _common_base(v, w)
    a, b = tangent_generator(v), tangent_generator(w)
    return float((1j * np.trace(p.rho @ commutator(b, a))).real)


def complex_structure_apply(t: Tangent) -> Tangent:
    """J(v) = sum_{k<l} (lam_k - lam_l)(P_k a P_l + P_l a P_k) with canonical ``a``."""
    p = t.base
    Jv = p.from_eigenbasis(p.gaps * _generator_eigen(t))
    out = Tangent.__new__(Tangent)
    out.v = (Jv + Jv.conj().T) / 2
    out.base = p
    return out


def metric(v: Tangent, w: Tangent) -> float:
    p = _common_base(v, w)
    a, b = _generator_eigen(v), _generator_eigen(w)
    return float(np.sum(p.gaps * (a * b.conj()).real))


def expectation_fn(a, rho) -> float:
    """e_a(rho) = Tr(a rho)."""
    return expectation(a, rho)


def d_expectation(a, v) -> float:
    """Directional derivative of e_a along ``v``: Tr(a v)."""
    if isinstance(v, Tangent):
        v = v.v
    return expectation(a, v)


def hamiltonian_tangent(a, point: OrbitPoint) -> Tangent:
    return point.tangent(hamiltonian_field(a, point.rho))


def gradient_field_isospectral(a, rho) -> np.ndarray:
    """Y^a(rho) = J(X^a)(rho) = sum_{blocks p != q} |mu_p - mu_q| P_p a P_q.

    Evaluated with the spectral formula at any Hermitian ``rho``, so the field
    is defined (and orbit-tangent) on a neighbourhood of every orbit.
    """
    a = generator(a)
    p = rho if isinstance(rho, OrbitPoint) else OrbitPoint(rho)
    Y = p.from_eigenbasis(p.gaps * p.to_eigenbasis(a))
    return (Y + Y.conj().T) / 2


def isospectral_gradient_tangent(a, point: OrbitPoint) -> Tangent:
    return point.tangent(gradient_field_isospectral(a, point))


def lie_bracket_fd(F, G, rho, h: float = 1e-5) -> np.ndarray:
    """[F, G](rho) = DG(rho)[F(rho)] - DF(rho)[G(rho)] by central differences.

    ``F`` and ``G`` map a Hermitian matrix to a Hermitian matrix.  Each
    directional derivative is a symmetric difference along a straight line
    in the ambient hyperplane; truncation error is O(h^2).
    """
    rho = np.asarray(rho, dtype=complex)
    f, g = F(rho), G(rho)
    dG_f = (G(rho + h * f) - G(rho - h * f)) / (2 * h)
    dF_g = (F(rho + h * g) - F(rho - h * g)) / (2 * h)
    return dG_f - dF_g
