"""Property suites behind ``qgeom selftest`` and ``qgeom kahler-check``.

Each criterion function takes a ``numpy`` Generator and returns
``{"passed": bool, "metrics": {...}}``.  Metrics are rounded to six
significant digits so reports are byte-stable across runs.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import composite, flows, qubit
from .basis import from_coordinates, gellmann_basis, to_coordinates
from .kahler import (
    OrbitPoint,
    complex_structure_apply,
    d_expectation,
    gradient_field_isospectral,
    lie_bracket_fd,
    metric,
    omega,
    tangent_generator,
)
from .linalg import commutator, partial_transpose
from .sampling import (
    random_nondegenerate_state,
    random_pure,
    random_sl,
    random_spectrum,
    random_state,
    random_states,
    random_traceless_hermitian,
    random_unitary,
)
from .states import maximally_mixed, pure_state, purity, rank_of
from .tensors import hamiltonian_field

BRACKET_TOL = 1e-4
FD_STEP = 1e-5


def _r(v: float) -> float:
    return float(f"{float(v):.6g}")


def _maxabs(A) -> float:
    return float(np.max(np.abs(A), initial=0.0))


def _result(checks: dict[str, tuple[float, float]], **extra) -> dict:
    """``checks`` maps a name to (value, tolerance); passes when value <= tol."""
    metrics = {k: _r(v) for k, (v, _) in checks.items()}
    failing = sorted(k for k, (v, tol) in checks.items() if not v <= tol)
    out = {"passed": not failing, "metrics": metrics, "failing": failing}
    out.update(extra)
    return out


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("QGEOM_THREADS", "1")))
    except ValueError:
        return 1


# -- Kahler / bracket samples ------------------------------------------------

def _fields(a):
    return (lambda r: hamiltonian_field(a, r)), (lambda r: gradient_field_isospectral(a, r))


def bracket_residuals(a, b, rho, h: float = FD_STEP) -> dict[str, float]:
    """Residuals of [X^a,X^b] = -X^c, [X^a,Y^b] = -Y^c, [Y^a,Y^b] = X^c, c = i[a,b]."""
    c = 1j * commutator(a, b)
    Xa, Ya = _fields(a)
    Xb, Yb = _fields(b)
    Xc, Yc = _fields(c)
    return {
        "bracket_XX": _maxabs(lie_bracket_fd(Xa, Xb, rho, h) + Xc(rho)),
        "bracket_XY": _maxabs(lie_bracket_fd(Xa, Yb, rho, h) + Yc(rho)),
        "bracket_YY": _maxabs(lie_bracket_fd(Ya, Yb, rho, h) - Xc(rho)),
    }


def tangent_frame(point: OrbitPoint) -> list:
    """Real basis of the tangent space: E_kl + E_lk and i(E_kl - E_lk) across blocks."""
    n = point.n
    frame = []
    for k in range(n):
        for l in range(k + 1, n):
            if point.blocks[k] == point.blocks[l]:
                continue
            for val in (1.0, 1j):
                M = np.zeros((n, n), dtype=complex)
                M[k, l] = val
                M[l, k] = np.conj(val)
                frame.append(point.tangent(point.from_eigenbasis(M)))
    return frame


def kahler_residuals(rho, rng: np.random.Generator, unitaries: int = 5) -> dict[str, float]:
    n = rho.shape[0]
    p = OrbitPoint(rho)
    a, b = random_traceless_hermitian(n, rng), random_traceless_hermitian(n, rng)
    v = p.tangent(hamiltonian_field(a, rho))
    w = p.tangent(hamiltonian_field(b, rho))
    Jv = complex_structure_apply(v)
    frame = tangent_frame(p)
    mix = rng.standard_normal((len(frame), len(frame)))
    F = [p.tangent(sum(c * t.v for c, t in zip(row, frame))) for row in mix]
    gram = np.array([[metric(s, t) for t in F] for s in F])
    lam = np.linalg.eigvalsh((gram + gram.T) / 2)
    out = {
        "J_squared_plus_id": _maxabs(complex_structure_apply(Jv).v + v.v),
        "metric_symmetry": abs(metric(v, w) - metric(w, v)),
        "metric_equals_omega_J": abs(metric(v, w) - omega(Jv, w)),
        "metric_min_eigenvalue_negated": -float(lam[0]) if len(lam) else 0.0,
        "omega_antisymmetry": abs(omega(v, w) + omega(w, v)),
        "omega_hamiltonian": abs(omega(v, w) + d_expectation(a, w)),
        "generator_reconstruction": _maxabs(1j * commutator(tangent_generator(v), rho) - v.v),
        "isospectral_first_order_drift": _maxabs(
            np.diag(p.to_eigenbasis(gradient_field_isospectral(b, p)))
        ),
    }
    inv = 0.0
    for _ in range(unitaries):
        U = random_unitary(n, rng)
        q = OrbitPoint(U @ rho @ U.conj().T)
        v2 = q.tangent(U @ v.v @ U.conj().T)
        w2 = q.tangent(U @ w.v @ U.conj().T)
        inv = max(
            inv,
            abs(omega(v2, w2) - omega(v, w)),
            abs(metric(v2, w2) - metric(v, w)),
            _maxabs(complex_structure_apply(v2).v - U @ Jv.v @ U.conj().T),
        )
    out["su_invariance"] = inv
    return out


KAHLER_TOLERANCES = {
    "bracket_XX": BRACKET_TOL,
    "bracket_XY": BRACKET_TOL,
    "bracket_YY": BRACKET_TOL,
    "J_squared_plus_id": 1e-10,
    "metric_symmetry": 1e-10,
    "metric_equals_omega_J": 1e-10,
    "metric_min_eigenvalue_negated": -1e-12,
    "omega_antisymmetry": 1e-10,
    "omega_hamiltonian": 1e-10,
    "generator_reconstruction": 1e-10,
    "isospectral_first_order_drift": 1e-8,
    "su_invariance": 1e-10,
}


def _kahler_sample(n: int, seed: np.random.SeedSequence) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    rho = random_nondegenerate_state(n, rng)
    a, b = random_traceless_hermitian(n, rng), random_traceless_hermitian(n, rng)
    res = bracket_residuals(a, b, rho)
    res.update(kahler_residuals(rho, rng))
    return res


def kahler_check(n: int, samples: int, seed: int, threads: int | None = None) -> dict:
    seeds = np.random.SeedSequence(seed).spawn(samples)
    workers = threads or thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            per_sample = list(ex.map(lambda s: _kahler_sample(n, s), seeds))
    else:
        per_sample = [_kahler_sample(n, s) for s in seeds]
    worst = {k: max(r[k] for r in per_sample) for k in KAHLER_TOLERANCES}
    return _result({k: (worst[k], KAHLER_TOLERANCES[k]) for k in worst},
                   config={"n": n, "samples": samples, "seed": seed})


# -- acceptance criteria -----------------------------------------------------

def criterion_basis(rng) -> dict:
    ortho = trace = recon = algebra = 0.0
    for n in (2, 3, 4, 5):
        B = gellmann_basis(n)
        m = B.dim
        gram = np.einsum("jab,kba->jk", B.h, B.h)
        ortho = max(ortho, _maxabs(gram - np.eye(m)))
        trace = max(trace, _maxabs(np.einsum("jaa->j", B.h)))
        hermit = _maxabs(B.h - B.h.conj().transpose(0, 2, 1))
        ortho = max(ortho, hermit)
        xi = random_state(n, rng)
        recon = max(recon, _maxabs(from_coordinates(to_coordinates(xi, B), B) - xi))
        hh = np.einsum("jab,kbc->jkac", B.h, B.h)
        comm = hh - hh.transpose(1, 0, 2, 3) - 1j * np.einsum("jkl,lab->jkab", B.c, B.h)
        anti = (hh + hh.transpose(1, 0, 2, 3) - np.einsum("jkl,lab->jkab", B.d, B.h)
                - (2.0 / n) * np.einsum("jk,ab->jkab", np.eye(m), np.eye(n)))
        algebra = max(algebra, _maxabs(comm), _maxabs(anti))
    su2 = gellmann_basis(2)
    return _result({
        "orthonormality": (ortho, 1e-11),
        "tracelessness": (trace, 1e-11),
        "reconstruction": (recon, 1e-11),
        "structure_constants": (algebra, 1e-11),
        "su2_c123_minus_sqrt2": (abs(su2.c[0, 1, 2] - np.sqrt(2.0)), 1e-11),
        "su2_d_max": (_maxabs(su2.d), 1e-11),
    })


def criterion_purity_band(rng, samples: int = 10_000) -> dict:
    violations = 0
    identity = 0.0
    for n in (2, 3, 4):
        B = gellmann_basis(n)
        for k in range(1, n + 1):
            rho = random_states(samples, n, k, rng)
            P = np.sum(np.abs(rho) ** 2, axis=(1, 2))
            violations += int(np.count_nonzero((P < 1.0 / k - 1e-12) | (P > 1.0 + 1e-12)))
            x = np.einsum("jab,sba->sj", B.h, rho).real
            identity = max(identity, _maxabs(P - 1.0 / n - np.sum(x * x, axis=1)))
    return _result({"violations": (violations, 0), "coordinate_identity": (identity, 1e-10)},
                   samples_per_class=samples)


def criterion_brackets(rng, pairs: int = 20, states: int = 5) -> dict:
    worst = {"bracket_XX": 0.0, "bracket_XY": 0.0, "bracket_YY": 0.0}
    for n in (2, 3):
        for _ in range(states):
            rho = random_nondegenerate_state(n, rng)
            for _ in range(pairs):
                a, b = random_traceless_hermitian(n, rng), random_traceless_hermitian(n, rng)
                for k, v in bracket_residuals(a, b, rho).items():
                    worst[k] = max(worst[k], v)
    return _result({k: (v, BRACKET_TOL) for k, v in worst.items()})


def criterion_kahler(rng, unitaries: int = 50) -> dict:
    keys = ("J_squared_plus_id", "metric_symmetry", "metric_equals_omega_J",
            "metric_min_eigenvalue_negated", "su_invariance")
    worst = dict.fromkeys(keys, -np.inf)
    states = [random_nondegenerate_state(n, rng) for n in (2, 3, 4)]
    U = random_unitary(4, rng)
    states.append((U * np.array([0.4, 0.2, 0.2, 0.2])) @ U.conj().T)
    for rho in states:
        res = kahler_residuals(rho, rng, unitaries=unitaries)
        for k in keys:
            worst[k] = max(worst[k], res[k])
    return _result({k: (worst[k], KAHLER_TOLERANCES[k]) for k in keys})


def criterion_spectrum_entropy(rng) -> dict:
    eig_drift = ent_drift = 0.0
    for n in (2, 3, 4):
        rho = random_nondegenerate_state(n, rng)
        a, b = random_traceless_hermitian(n, rng), random_traceless_hermitian(n, rng)
        for a_, b_ in ((np.zeros_like(a), b), (a, b)):
            spec = flows.FlowSpec("isospectral_gradient", a_, b_, 1.0, 1e-3)
            traj = flows.integrate(spec, rho)
            w = traj.spectra
            eig_drift = max(eig_drift, _maxabs(w - w[0]))
            S = traj.entropies
            ent_drift = max(ent_drift, _maxabs(S - S[0]))
    b = np.diag([1.0, -1.0]).astype(complex)
    traj = flows.integrate(flows.FlowSpec("gradient_like", np.zeros_like(b), b, 0.5, 1e-3),
                           maximally_mixed(2))
    dS = float(traj.entropies[-1] - traj.entropies[0])
    return _result({
        "isospectral_eigenvalue_drift": (eig_drift, 1e-6),
        "isospectral_entropy_drift": (ent_drift, 1e-6),
        # negated so the check reads "value <= tol"
        "gradient_like_entropy_change_negated": (-abs(dS), -1e-3),
    }, gradient_like_entropy_change=_r(dS))


def criterion_rank_convexity(rng, trials: int = 100) -> dict:
    mismatches = 0
    for n in (2, 3, 4):
        for k in range(1, n + 1):
            for _ in range(trials):
                rho = random_state(n, rng, rank=k)
                g = random_sl(n, rng, scale=1.0)
                mismatches += rank_of(flows.sl_act(g, rho, normalize_det=True)) != k
    g = np.diag([2.0, 0.5]).astype(complex)
    r1, r2 = pure_state([1, 0]), pure_state([0, 1])
    gap = _maxabs(flows.sl_act(g, (r1 + r2) / 2)
                  - (flows.sl_act(g, r1) + flows.sl_act(g, r2)) / 2)
    g3 = random_sl(3, rng, scale=1.0)
    s1, s2 = random_state(3, rng), random_state(3, rng)
    gap3 = _maxabs(flows.sl_act(g3, (s1 + s2) / 2, normalize_det=True)
                   - (flows.sl_act(g3, s1, normalize_det=True) + flows.sl_act(g3, s2, normalize_det=True)) / 2)
    return _result({
        "rank_mismatches": (mismatches, 0),
        "convexity_gap_negated": (-max(gap, gap3), -1e-6),
    }, convexity_gap_diag=_r(gap), convexity_gap_random=_r(gap3))


def criterion_closed_forms(rng) -> dict:
    sl_dev = pure_drift = fd_dev = 0.0
    for n in (2, 3):
        rho = random_state(n, rng)
        a, b = random_traceless_hermitian(n, rng), random_traceless_hermitian(n, rng)
        spec = flows.FlowSpec("sl_combined", a, b, 1.0, 1e-3, record_every=50)
        traj = flows.integrate(spec, rho)
        for t, s in zip(traj.times, traj.states):
            sl_dev = max(sl_dev, _maxabs(s - flows.sl_propagate(a, b, rho, t)))
        psi0 = pure_state(random_pure(n, rng))
        h = FD_STEP
        for t in np.linspace(0.0, 1.0, 21):
            g = flows.pure_gradient_propagate(b, psi0, t)
            pure_drift = max(pure_drift, abs(purity(g) - 1.0))
            deriv = (flows.pure_gradient_propagate(b, psi0, t + h)
                     - flows.pure_gradient_propagate(b, psi0, t - h)) / (2 * h)
            fd_dev = max(fd_dev, _maxabs(deriv - gradient_field_isospectral(b, g)))
    return _result({
        "sl_vs_rk4": (sl_dev, 1e-6),
        "pure_purity_drift": (pure_drift, 1e-12),
        "pure_fd_vs_field": (fd_dev, 1e-8),
    })


def _punctured_ball(count: int, rng) -> np.ndarray:
    d = rng.standard_normal((count, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    r = rng.uniform(1e-3, 1.0, size=count) ** (1.0 / 3.0)
    return d * r[:, None]


def criterion_qubit(rng, points: int = 100) -> dict:
    worst = dict.fromkeys(("J_cubed_plus_J", "pseudo_gradient_radial", "G_equals_J_Lambda",
                           "J_R_equals_Lambda_over_4r", "J_R_equals_minus_Lambda_over_r"), 0.0)
    scales = []
    for x in _punctured_ball(points, rng):
        rep = qubit.qubit_tensor_identities(x, rng)
        for k in worst:
            worst[k] = max(worst[k], rep["checks"][k])
        scales.append(rep["frak_J_R_scale"])
    # the radial check is x . Y^j; Y^j(r^2) is twice that
    return _result({
        "J_cubed_plus_J": (worst["J_cubed_plus_J"], 1e-12),
        "Y_r2_derivative": (2 * worst["pseudo_gradient_radial"], 1e-12),
        "G_equals_J_Lambda": (worst["G_equals_J_Lambda"], 1e-10),
        "J_R_equals_Lambda_over_4r": (worst["J_R_equals_Lambda_over_4r"], 1e-10),
    }, J_R_equals_minus_Lambda_over_r=_r(worst["J_R_equals_minus_Lambda_over_r"]),
        J_R_scale_min=_r(min(scales)), J_R_scale_max=_r(max(scales)))


def _sample_ball_states(count: int, rng) -> np.ndarray:
    """Two-qubit states with purity <= 1/3, including the boundary."""
    sigma = random_states(count, 4, 4, rng)
    P = np.sum(np.abs(sigma) ** 2, axis=(1, 2))
    p_max = np.sqrt((1.0 / 3.0 - 0.25) / (P - 0.25))
    p = np.minimum(1.0, p_max) * np.where(np.arange(count) % 4 == 0, 1.0, rng.uniform(size=count))
    return (1 - p)[:, None, None] * np.eye(4) / 4 + p[:, None, None] * sigma


def criterion_composite(rng, schmidt_trials: int = 200, ball_samples: int = 10_000,
                        conjugations: int = 200) -> dict:
    sr_mismatch = 0
    for i in range(schmidt_trials):
        dims = ((2, 2), (2, 3), (3, 3))[i % 3]
        n_a, n_b = dims
        psi = random_pure(n_a * n_b, rng)
        if i % 2:
            # force a lower Schmidt rank half of the time
            psi = np.kron(random_pure(n_a, rng), random_pure(n_b, rng))
        before = composite.schmidt_rank(psi, dims).rank
        g = np.kron(random_sl(n_a, rng, 1.0), random_sl(n_b, rng, 1.0))
        phi = g @ psi
        sr_mismatch += composite.schmidt_rank(phi / np.linalg.norm(phi), dims).rank != before

    transport = 0.0
    for ka, kb in ((1, 1), (2, 1), (1, 2), (2, 2)):
        dims = (2, 3)
        rho = np.kron(random_state(2, rng, ka), random_state(3, rng, kb))
        target = np.kron(random_state(2, rng, ka), random_state(3, rng, kb))
        ga, gb = composite.product_transporter(rho, target, dims)
        moved = composite.local_sl_act(ga, gb, rho)
        ha, hb = composite.product_transporter(moved, rho, dims)
        back = composite.local_sl_act(ha, hb, moved)
        transport = max(transport, _maxabs(moved - target), _maxabs(back - rho))

    ball = _sample_ball_states(ball_samples, rng)
    in_ball = np.sum(np.abs(ball) ** 2, axis=(1, 2)) <= 1.0 / 3.0 + composite.BALL_TOL
    pt = np.array([partial_transpose(s, (2, 2)) for s in ball[in_ball]])
    ball_violations = int(np.count_nonzero(np.linalg.eigvalsh(pt)[:, 0] < composite.PPT_TOL))

    spectra = [np.array([0.4, 0.3, 0.2, 0.1]), np.full(4, 0.25)]
    while len(spectra) < 5:
        w = random_spectrum(4, rng)
        if composite.absolutely_separable_2q(w):
            spectra.append(w)
    abs_violations = 0
    for w in spectra:
        U = random_unitary(4, rng, size=conjugations)
        states = np.einsum("sij,j,skj->sik", U, w, U.conj())
        pt = np.array([partial_transpose(s, (2, 2)) for s in states])
        abs_violations += int(np.count_nonzero(np.linalg.eigvalsh(pt)[:, 0] < composite.PPT_TOL))

    return _result({
        "schmidt_rank_mismatches": (sr_mismatch, 0),
        "transport_round_trip": (transport, 1e-8),
        "ball_ppt_violations": (ball_violations, 0),
        "absolutely_separable_ppt_violations": (abs_violations, 0),
    }, ball_states_tested=int(in_ball.sum()), spectra_tested=len(spectra))


CRITERIA = {
    "1_basis_integrity": criterion_basis,
    "2_purity_rank_band": criterion_purity_band,
    "3_sl_commutation": criterion_brackets,
    "4_kahler_triple": criterion_kahler,
    "5_spectrum_entropy": criterion_spectrum_entropy,
    "6_rank_convexity": criterion_rank_convexity,
    "7_closed_forms": criterion_closed_forms,
    "8_qubit_identities": criterion_qubit,
    "9_composite": criterion_composite,
}


def run_criterion(key: str, seed: int) -> dict:
    """Run one criterion with the same generator stream ``run_selftest`` uses."""
    idx = list(CRITERIA).index(key)
    child = np.random.SeedSequence(seed).spawn(len(CRITERIA))[idx]
    return CRITERIA[key](np.random.default_rng(child))


def run_selftest(seed: int, only: list[str] | None = None) -> dict:
    keys = [k for k in CRITERIA if not only or k.split("_")[0] in only or k in only]
    children = dict(zip(CRITERIA, np.random.SeedSequence(seed).spawn(len(CRITERIA))))
    results = {k: CRITERIA[k](np.random.default_rng(children[k])) for k in keys}
    return {
        "config": {"seed": seed, "criteria": keys},
        "criteria": results,
        "passed": all(r["passed"] for r in results.values()),
        "failing": [k for k, r in results.items() if not r["passed"]],
    }
