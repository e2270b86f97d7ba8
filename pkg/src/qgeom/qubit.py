"""Explicit qubit calculus in Bloch coordinates x_j = Tr(sigma_j rho).

With K = [x]_x (so K v = x cross v) the tensors in these coordinates are

    Lambda = -2 K                  (row j is L^j)
    R      = 2 (I - x x^T)         (row j is Ytilde^j)
    frak J = K / r
    G      = frak J Lambda = (2 / r)(r^2 I - x x^T)

and frak J R = -Lambda / r.
"""

from __future__ import annotations

import numpy as np

from .errors import AtCenter, DimensionError, NotState
from .linalg import as_hermitian

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)
PAULI.setflags(write=False)

BALL_TOL = 1e-10
CENTER_TOL = 1e-10


def bloch_coords(rho) -> np.ndarray:
    rho = as_hermitian(rho)
    if rho.shape != (2, 2):
        raise DimensionError(f"Bloch coordinates need a 2x2 matrix, got {rho.shape}")
    return np.einsum("jab,ba->j", PAULI, rho).real


def bloch_state(x) -> np.ndarray:
    x = _vec3(x)
    r = np.linalg.norm(x)
    if r > 1.0 + BALL_TOL:
        raise NotState(f"|x| = {r!r} lies outside the Bloch ball")
    return (np.eye(2) + np.einsum("j,jab->ab", x, PAULI)) / 2


def bloch_vector(v) -> np.ndarray:
    """Bloch components Tr(sigma_j v) of a traceless 2x2 matrix."""
    return np.einsum("jab,ba->j", PAULI, np.asarray(v)).real


def _vec3(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise DimensionError(f"expected a 3-vector, got shape {x.shape}")
    return x


def _axis(j: int) -> int:
    if j not in (1, 2, 3):
        raise DimensionError(f"axis index must be 1, 2 or 3, got {j!r}")
    return j - 1


def _radius(x: np.ndarray) -> float:
    r = float(np.linalg.norm(x))
    if r <= CENTER_TOL:
        raise AtCenter("undefined at the maximally mixed state x = 0")
    return r


def cross_matrix(x) -> np.ndarray:
    x1, x2, x3 = _vec3(x)
    return np.array([[0.0, -x3, x2], [x3, 0.0, -x1], [-x2, x1, 0.0]])


def qubit_L(j: int, x) -> np.ndarray:
    """Bloch image of i[sigma_j, rho]: 2 x cross e_j."""
    e = np.zeros(3)
    e[_axis(j)] = 1.0
    return 2.0 * np.cross(_vec3(x), e)


def qubit_Ytilde(j: int, x) -> np.ndarray:
    """Bloch image of {sigma_j, rho} - 2 Tr(sigma_j rho) rho: 2(e_j - x_j x)."""
    x = _vec3(x)
    k = _axis(j)
    out = -2.0 * x[k] * x
    out[k] += 2.0
    return out


def frak_J_matrix(x) -> np.ndarray:
    x = _vec3(x)
    return cross_matrix(x) / _radius(x)


def frak_J_apply(x, v) -> np.ndarray:
    """(1/2r) sum_j v_j L^j(x) = (x cross v) / r."""
    x = _vec3(x)
    return np.cross(x, _vec3(v)) / _radius(x)


def qubit_pseudo_gradient(j: int, x) -> np.ndarray:
    """Y^j = (2/r)(r^2 e_j - x_j x); tangent to the sphere of radius r."""
    x = _vec3(x)
    r = _radius(x)
    k = _axis(j)
    out = -x[k] * x
    out[k] += r * r
    return (2.0 / r) * out


def poisson_matrix_bloch(x) -> np.ndarray:
    return -2.0 * cross_matrix(x)


def r_matrix_bloch(x) -> np.ndarray:
    x = _vec3(x)
    return 2.0 * (np.eye(3) - np.outer(x, x))


def g_matrix_bloch(x) -> np.ndarray:
    x = _vec3(x)
    r = _radius(x)
    return (2.0 / r) * (r * r * np.eye(3) - np.outer(x, x))


def qubit_tensor_identities(x, rng: np.random.Generator | None = None, tol: float = 1e-10) -> dict:
    """Check the qubit tensor identities at one point of the punctured ball.

    Every identity is evaluated as a 3x3 array.  ``checks`` maps identity
    names to residuals (max abs entry); ``passed`` holds ``residual <= tol``.
    ``frak_J_R_scale`` is the least-squares c with frak J R = c Lambda / r.
    """
    x = _vec3(x)
    r = _radius(x)
    Jm = frak_J_matrix(x)
    Lam = poisson_matrix_bloch(x)
    R = r_matrix_bloch(x)
    G = g_matrix_bloch(x)
    JR = Jm @ R
    rng = rng or np.random.default_rng(0)
    a = rng.normal(size=3)
    L_a = a @ Lam
    JYt_a = Jm @ (a @ R)

    residual = {
        "J_cubed_plus_J": Jm @ Jm @ Jm + Jm,
        "G_equals_J_Lambda": G - Jm @ Lam,
        "J_R_equals_Lambda_over_4r": JR - Lam / (4 * r),
        "J_R_equals_minus_Lambda_over_r": JR + Lam / r,
        "L_equals_4r_J_Ytilde": L_a - 4 * r * JYt_a,
        "L_equals_r_J_Ytilde": L_a - r * JYt_a,
        "pseudo_gradient_radial": np.array([qubit_pseudo_gradient(j, x) @ x for j in (1, 2, 3)]),
    }
    checks = {k: float(np.max(np.abs(v))) for k, v in residual.items()}
    lam_flat = (Lam / r).ravel()
    scale = float(lam_flat @ JR.ravel() / (lam_flat @ lam_flat))
    return {
        "x": x.tolist(),
        "r": r,
        "checks": checks,
        "passed": {k: v <= tol for k, v in checks.items()},
        "frak_J_R_scale": scale,
    }
