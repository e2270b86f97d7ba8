import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgeom import composite
from qgeom.errors import DimensionError, NotProduct, RankMismatch
from qgeom.flows import sl_act
from qgeom.linalg import partial_transpose
from qgeom.sampling import random_pure, random_sl, random_state, random_unitary
from qgeom.states import maximally_mixed, pure_state, purity, rank_of

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)
BELL_RHO = pure_state(BELL)


def werner(p):
    return (1 - p) * np.eye(4) / 4 + p * BELL_RHO


def test_parse_dims():
    assert composite.parse_dims("2x3") == (2, 3)
    assert composite.parse_dims((3, 2)) == (3, 2)
    with pytest.raises(DimensionError):
        composite.parse_dims("2by3")


def test_schmidt_examples():
    prod = np.kron([1, 0], [1, 0])
    assert composite.schmidt_rank(prod, (2, 2)).rank == 1
    sd = composite.schmidt_rank(BELL, (2, 2))
    assert sd.rank == 2
    assert np.allclose(sd.coefficients, [1 / np.sqrt(2)] * 2)
    rng = np.random.default_rng(0)
    rotated = np.kron(random_unitary(2, rng), random_unitary(2, rng)) @ BELL
    assert composite.schmidt_rank(rotated, (2, 2)).rank == 2


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 3), (3, 2)]), st.integers(0, 2**31 - 1))
def test_schmidt_coefficients_normalized(dims, seed):
    psi = random_pure(dims[0] * dims[1], np.random.default_rng(seed))
    sd = composite.schmidt_rank(psi, dims)
    assert np.sum(sd.coefficients ** 2) == pytest.approx(1.0)
    assert sd.rank == min(dims)


def test_is_product_examples():
    rng = np.random.default_rng(1)
    assert composite.is_product(np.kron(random_state(2, rng), random_state(3, rng)), (2, 3))
    assert not composite.is_product(BELL_RHO, (2, 2))
    classical = (pure_state([1, 0, 0, 0]) + pure_state([0, 0, 0, 1])) / 2
    assert not composite.is_product(classical, (2, 2))
    assert composite.product_defect(BELL_RHO, (2, 2)) == pytest.approx(np.sqrt(3) / 2)


def test_ab_rank_examples():
    assert composite.ab_rank(np.kron(np.eye(2) / 2, pure_state([1, 0])), (2, 2)) == (2, 1)
    assert composite.ab_rank(pure_state(np.kron([1, 1j], [0, 1])), (2, 2)) == (1, 1)
    assert composite.ab_rank(maximally_mixed(4), (2, 2)) == (2, 2)
    with pytest.raises(NotProduct):
        composite.ab_rank(BELL_RHO, (2, 2))


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_local_sl_preserves_schmidt_rank(dims):
    rng = np.random.default_rng(sum(dims))
    n_a, n_b = dims
    for trial in range(200 // 3 + 1):
        k = 1 + trial % min(dims)
        # random vector with Schmidt rank k
        A = np.linalg.qr(random_unitary(n_a, rng)[:, :k])[0]
        B = np.linalg.qr(random_unitary(n_b, rng)[:, :k])[0]
        coeffs = rng.uniform(0.1, 1, k)
        psi = (A * coeffs) @ B.T
        psi = psi.ravel() / np.linalg.norm(psi)
        assert composite.schmidt_rank(psi, dims).rank == k
        g = np.kron(random_sl(n_a, rng, 1.0), random_sl(n_b, rng, 1.0))
        phi = g @ psi
        assert composite.schmidt_rank(phi / np.linalg.norm(phi), dims).rank == k
        out = composite.local_sl_act(*(random_sl(d, rng, 1.0) for d in dims), pure_state(psi))
        assert rank_of(out) == 1


def test_local_unitaries_keep_schmidt_coefficients():
    rng = np.random.default_rng(2)
    psi = random_pure(6, rng)
    before = composite.schmidt_rank(psi, (2, 3)).coefficients
    after = composite.schmidt_rank(np.kron(random_unitary(2, rng), random_unitary(3, rng)) @ psi, (2, 3))
    assert np.allclose(before, after.coefficients, atol=1e-12)


def test_local_sl_changes_bell_coefficients_not_rank():
    g_a = np.diag([2.0, 0.5])
    phi = np.kron(g_a, np.eye(2)) @ BELL
    sd = composite.schmidt_rank(phi / np.linalg.norm(phi), (2, 2))
    assert sd.rank == 2
    assert not np.allclose(sd.coefficients, [1 / np.sqrt(2)] * 2)


def test_global_sl_changes_schmidt_rank():
    rng = np.random.default_rng(3)
    for dims in ((2, 2), (2, 3), (3, 3)):
        N = dims[0] * dims[1]
        psi = np.zeros(N)
        psi[0] = 1
        phi = random_sl(N, rng, 1.0) @ psi
        assert composite.schmidt_rank(phi / np.linalg.norm(phi), dims).rank > 1


def test_local_action_factorizes_on_products():
    rng = np.random.default_rng(4)
    ra, rb = random_state(2, rng), random_state(3, rng)
    ga, gb = random_sl(2, rng, 1.0), random_sl(3, rng, 1.0)
    out = composite.local_sl_act(ga, gb, np.kron(ra, rb))
    assert np.allclose(out, np.kron(sl_act(ga, ra, True), sl_act(gb, rb, True)), atol=1e-10)
    assert composite.is_product(out, (2, 3))
    assert composite.ab_rank(out, (2, 3)) == composite.ab_rank(np.kron(ra, rb), (2, 3))


def test_transporter_examples():
    rng = np.random.default_rng(5)
    rho = np.kron(random_state(2, rng), random_state(2, rng))
    ga, gb = composite.product_transporter(rho, rho, (2, 2))
    for g in (ga, gb):
        assert np.allclose(g, g[0, 0] * np.eye(2), atol=1e-10)
        assert np.linalg.det(g) == pytest.approx(1.0)
    src = np.kron(np.diag([0.9, 0.1]), np.diag([1.0, 0.0]))
    dst = np.kron(np.diag([0.5, 0.5]), np.diag([1.0, 0.0]))
    ga, gb = composite.product_transporter(src, dst, (2, 2))
    expected = np.diag([np.sqrt(5 / 9), np.sqrt(5)])
    expected = expected / np.sqrt(np.linalg.det(expected))
    assert np.allclose(ga, expected)
    assert np.allclose(composite.local_sl_act(ga, gb, src), dst)


@pytest.mark.parametrize("ranks", [(1, 1), (1, 2), (2, 3), (2, 2)])
def test_transport_round_trip(ranks):
    rng = np.random.default_rng(sum(ranks))
    ka, kb = ranks
    rho = np.kron(random_state(2, rng, ka), random_state(3, rng, kb))
    target = np.kron(random_state(2, rng, ka), random_state(3, rng, kb))
    ga, gb = composite.product_transporter(rho, target, (2, 3))
    moved = composite.local_sl_act(ga, gb, rho)
    assert np.allclose(moved, target, atol=1e-8)
    back = composite.local_sl_act(*composite.product_transporter(moved, rho, (2, 3)), moved)
    assert np.allclose(back, rho, atol=1e-8)


def test_transport_rank_mismatch():
    rng = np.random.default_rng(6)
    rho = np.kron(random_state(2, rng, 1), random_state(2, rng))
    target = np.kron(random_state(2, rng), random_state(2, rng))
    with pytest.raises(RankMismatch):
        composite.product_transporter(rho, target, (2, 2))


def test_ppt_examples():
    rng = np.random.default_rng(7)
    ok, lam = composite.ppt_test(np.kron(random_state(2, rng), random_state(2, rng)), (2, 2))
    assert ok and lam >= -1e-12
    ok, lam = composite.ppt_test(BELL_RHO, (2, 2))
    assert not ok and lam == pytest.approx(-0.5)


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3 - 1e-6, 1 / 3 + 1e-6, 0.5, 1.0])
def test_werner_threshold(p):
    # partial transpose spectrum: (1+p)/4 (x3) and (1-3p)/4
    ok, lam = composite.ppt_test(werner(p), (2, 2))
    assert lam == pytest.approx(min((1 + p) / 4, (1 - 3 * p) / 4), abs=1e-12)
    assert ok == (p <= 1 / 3)


def test_ball_examples():
    assert composite.separable_ball_test(maximally_mixed(4), (2, 2))
    assert not composite.separable_ball_test(BELL_RHO, (2, 2))
    rho = werner(1 / 3)
    assert purity(rho) == pytest.approx(1 / 3)
    assert composite.separable_ball_test(rho, (2, 2))


def test_ball_states_are_ppt_and_full_rank():
    rng = np.random.default_rng(8)
    hits = 0
    for _ in range(400):
        sigma = random_state(4, rng)
        p = rng.uniform(0, 1)
        rho = (1 - p) * np.eye(4) / 4 + p * sigma
        if composite.separable_ball_test(rho, (2, 2)):
            hits += 1
            assert composite.ppt_test(rho, (2, 2))[0]
            assert rank_of(rho) == 4
    assert hits > 50


def test_absolute_separability_examples():
    assert composite.absolutely_separable_2q([0.25] * 4)
    assert composite.absolutely_separable_2q([0.1, 0.2, 0.3, 0.4])
    assert not composite.absolutely_separable_2q([1, 0, 0, 0])
    with pytest.raises(DimensionError):
        composite.absolutely_separable_2q([0.5, 0.5])


def test_absolutely_separable_spectrum_survives_conjugation():
    rng = np.random.default_rng(9)
    w = np.array([0.4, 0.3, 0.2, 0.1])
    U = random_unitary(4, rng, size=200)
    states = np.einsum("sij,j,skj->sik", U, w, U.conj())
    lam = [np.linalg.eigvalsh(partial_transpose(s, (2, 2)))[0] for s in states]
    assert min(lam) >= composite.PPT_TOL


def test_product_implies_ppt():
    rng = np.random.default_rng(10)
    for dims in ((2, 2), (2, 3)):
        rho = np.kron(random_state(dims[0], rng), random_state(dims[1], rng))
        assert composite.is_product(rho, dims)
        assert composite.ppt_test(rho, dims)[0]
