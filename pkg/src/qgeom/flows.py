"""Flows on the state space: RK4 for arbitrary fields plus closed forms.

Flow kinds and their velocity fields:

    unitary               X^a        = i[a, rho]
    gradient_like         Ytilde^b   = {b, rho} - 2 Tr(b rho) rho
    sl_combined           X^a + Ytilde^b
    isospectral_gradient  X^a + Y^b,  Y^b = J(X^b)
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .basis import components, gellmann_basis
from .errors import ContractError, DegenerateDenominator, DetNotOne, FlowAborted, NotPure
from .kahler import gradient_field_isospectral
from .linalg import as_square, eig_hermitian, expm
from .states import entropy_of_spectrum, rank_of, validate_state
from .tensors import generator, gradient_like_field, hamiltonian_field

log = logging.getLogger(__name__)

FLOW_KINDS = ("unitary", "gradient_like", "sl_combined", "isospectral_gradient")
DET_TOL = 1e-8
DENOM_TOL = 1e-14
ABORT_EIG = -1e-6

Field = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class FlowSpec:
    kind: str
    a: np.ndarray
    b: np.ndarray
    t_final: float
    dt: float
    record_every: int = 1

    def __post_init__(self):
        if self.kind not in FLOW_KINDS:
            raise ContractError(f"unknown flow kind {self.kind!r}; expected one of {FLOW_KINDS}")
        if not self.dt > 0:
            raise ContractError(f"dt must be positive, got {self.dt}")
        if not self.t_final >= 0:
            raise ContractError(f"t_final must be non-negative, got {self.t_final}")
        if int(self.record_every) < 1:
            raise ContractError("record_every must be >= 1")
        a, b = generator(self.a), generator(self.b)
        if a.shape != b.shape:
            raise ContractError(f"generator shapes differ: {a.shape} vs {b.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "record_every", int(self.record_every))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @classmethod
    def from_dict(cls, d: dict, n: int | None = None) -> "FlowSpec":
        from .io import matrix_from_json

        gens = d.get("generators", d)
        a = gens.get("a")
        b = gens.get("b")
        if a is None and b is None and n is None:
            raise ContractError("flow spec needs generator 'a' or 'b' (or a known dimension)")
        a = matrix_from_json(a) if a is not None else None
        b = matrix_from_json(b) if b is not None else None
        size = n or (a if a is not None else b).shape[0]
        zero = np.zeros((size, size), dtype=complex)
        return cls(
            kind=d["kind"],
            a=zero if a is None else a,
            b=zero if b is None else b,
            t_final=float(d["t_final"]),
            dt=float(d["dt"]),
            record_every=int(d.get("record_every", 1)),
        )


def field_for(spec: FlowSpec) -> Field:
    a, b = spec.a, spec.b
    if spec.kind == "unitary":
        return lambda rho: hamiltonian_field(a, rho)
    if spec.kind == "gradient_like":
        return lambda rho: gradient_like_field(b, rho)
    if spec.kind == "sl_combined":
        return lambda rho: hamiltonian_field(a, rho) + gradient_like_field(b, rho)
    return lambda rho: hamiltonian_field(a, rho) + gradient_field_isospectral(b, rho)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (steps, n, n)
    trace_corrections: np.ndarray = field(default=None)

    @property
    def n(self) -> int:
        return self.states.shape[1]

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def spectra(self) -> np.ndarray:
        return np.array([eig_hermitian(s)[0] for s in self.states])

    @property
    def purities(self) -> np.ndarray:
        return np.sum(np.abs(self.states) ** 2, axis=(1, 2))

    @property
    def entropies(self) -> np.ndarray:
        return np.array([entropy_of_spectrum(w) for w in self.spectra])

    @property
    def coordinates(self) -> np.ndarray:
        basis = gellmann_basis(self.n)
        return np.array([components(s, basis) for s in self.states])

    def rows(self) -> list[list[float]]:
        spectra = self.spectra
        coords = self.coordinates
        purities = self.purities
        out = []
        for i, t in enumerate(self.times):
            out.append([float(t), *coords[i], float(purities[i]),
                        entropy_of_spectrum(spectra[i]), *spectra[i]])
        return out

    def header(self) -> list[str]:
        m = self.n * self.n - 1
        return (["t"] + [f"x_{j}" for j in range(1, m + 1)] + ["purity", "entropy"]
                + [f"lambda_{k}" for k in range(1, self.n + 1)])

    def to_csv(self, path_or_file) -> None:
        def dump(fh):
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header())
            for row in self.rows():
                w.writerow([_fmt(v) for v in row])

        if hasattr(path_or_file, "write"):
            dump(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                dump(fh)


def _fmt(v: float) -> str:
    # repr is shortest round-trip, so output is stable and lossless
    v = float(v)
    return repr(0.0 if v == 0 else v)


def rk4_integrate(fld: Field, rho0, t_final: float, dt: float, record_every: int = 1) -> Trajectory:
    """Classical RK4 with trace projection after each step.

    Raises :class:`FlowAborted` (carrying the valid prefix) if the minimum
    eigenvalue drops below ``ABORT_EIG``.
    """
    if not dt > 0:
        raise ContractError(f"dt must be positive, got {dt}")
    if t_final < 0:
        raise ContractError(f"t_final must be non-negative, got {t_final}")
    rho = validate_state(rho0).astype(complex)
    n = rho.shape[0]
    eye = np.eye(n)
    rho -= (np.trace(rho).real - 1.0) / n * eye
    steps = int(round(t_final / dt))
    if steps and abs(steps * dt - t_final) > 1e-9 * max(1.0, t_final):
        # last step is shortened to land exactly on t_final
        steps = int(np.ceil(t_final / dt))
    times, states, corrections = [0.0], [rho.copy()], [0.0]
    t = 0.0
    for i in range(1, steps + 1):
        h = min(dt, t_final - t)
        k1 = fld(rho)
        k2 = fld(rho + 0.5 * h * k1)
        k3 = fld(rho + 0.5 * h * k2)
        k4 = fld(rho + h * k3)
        nxt = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        nxt = (nxt + nxt.conj().T) / 2
        defect = np.trace(nxt).real - 1.0
        nxt -= (defect / n) * eye
        t = i * dt if i < steps else t_final
        lam_min = np.linalg.eigvalsh(nxt)[0]
        if lam_min < ABORT_EIG:
            traj = Trajectory(np.array(times), np.array(states), np.array(corrections))
            raise FlowAborted(f"state left the state space at t={t:.6g} (min eigenvalue {lam_min:.3e})", traj)
        if defect:
            log.debug("t=%.6g trace correction %.3e", t, defect)
        rho = nxt
        if i % record_every == 0 or i == steps:
            times.append(t)
            states.append(rho.copy())
            corrections.append(defect)
    return Trajectory(np.array(times), np.array(states), np.array(corrections))


def integrate(spec: FlowSpec, rho0) -> Trajectory:
    return rk4_integrate(field_for(spec), rho0, spec.t_final, spec.dt, spec.record_every)


def unitary_propagate(a, rho0, t: float) -> np.ndarray:
    """e^{i t a} rho0 e^{-i t a}."""
    a = generator(a)
    U = expm(1j * t * a)
    out = U @ np.asarray(rho0) @ U.conj().T
    return (out + out.conj().T) / 2


def sl_normalize(g) -> np.ndarray:
    """g / det(g)^{1/n}, using the principal root."""
    g = as_square(g)
    det = np.linalg.det(g)
    if abs(det) < DENOM_TOL:
        raise DegenerateDenominator(f"det(g) = {det:.3e} cannot be normalized")
    return g / det ** (1.0 / g.shape[0])


def sl_act(g, rho, normalize_det: bool = False) -> np.ndarray:
    """g rho g^dagger / Tr(g rho g^dagger) for det g = 1."""
    g = as_square(g)
    if normalize_det:
        g = sl_normalize(g)
    det = np.linalg.det(g)
    if abs(det - 1.0) > DET_TOL:
        raise DetNotOne(det)
    num = g @ np.asarray(rho) @ g.conj().T
    tr = np.trace(num).real
    if tr <= DENOM_TOL:
        raise DegenerateDenominator(f"Tr(g rho g^dagger) = {tr:.3e}")
    out = num / tr
    return (out + out.conj().T) / 2


def sl_group_element(a, b, t: float) -> np.ndarray:
    """g_t = exp(t (b + i a)); det g_t = 1 for traceless a, b."""
    return expm(t * (generator(b) + 1j * generator(a)))


def sl_propagate(a, b, rho0, t: float) -> np.ndarray:
    """Integral curve of X^a + Ytilde^b through rho0."""
    return sl_act(sl_group_element(a, b, t), rho0)


def pure_gradient_propagate(a, rho0, t: float) -> np.ndarray:
    """e^{t a} rho0 e^{t a} / Tr(...) for a pure rho0."""
    rho0 = validate_state(rho0)
    if rank_of(rho0) != 1:
        raise NotPure(f"state has rank {rank_of(rho0)}, expected 1")
    w, V = eig_hermitian(generator(a))
    # shifting the exponent by a multiple of I cancels in the normalization
    # and keeps e^{ta} finite for large t
    shift = w[0] if t >= 0 else w[-1]
    g = (V * np.exp(t * (w - shift))) @ V.conj().T
    num = g @ rho0 @ g.conj().T
    tr = np.trace(num).real
    if tr <= DENOM_TOL:
        raise DegenerateDenominator(f"Tr(g rho g^dagger) = {tr:.3e}")
    out = num / tr
    return (out + out.conj().T) / 2


def isospectral_propagate(a, b, rho0, t: float) -> np.ndarray:
    """Integral curve of X^a + Y^b through rho0.

    Acts on the flag of eigenvectors: orthonormalize (Gram-Schmidt, via QR)
    the columns of exp(t(b + i a)) V, eigenvalues descending, and rebuild
    the state with the original spectrum.  For pure states this reduces to
    the normalized SL action.
    """
    rho0 = validate_state(rho0)
    w, V = eig_hermitian(rho0)
    g = sl_group_element(a, b, t)
    Q, R = np.linalg.qr(g @ V)
    # fix the QR phase freedom so Q is continuous in t
    phases = np.diag(R) / np.abs(np.diag(R))
    Q = Q * phases
    out = (Q * w) @ Q.conj().T
    return (out + out.conj().T) / 2


def closed_form(spec: FlowSpec, rho0, t: float) -> np.ndarray:
    if spec.kind == "unitary":
        return unitary_propagate(spec.a, rho0, t)
    if spec.kind == "gradient_like":
        return sl_propagate(np.zeros_like(spec.b), spec.b, rho0, t)
    if spec.kind == "sl_combined":
        return sl_propagate(spec.a, spec.b, rho0, t)
    return isospectral_propagate(spec.a, spec.b, rho0, t)
