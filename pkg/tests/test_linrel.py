"""Relation algebra: constructors, adjoints, accretivity, sectors and resolvent limits."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from matrices import accretive_matrix, cmat, psd_singular, random_relation, sectorial_matrix
from sectorium import linrel
from sectorium.errors import DomainError
from sectorium.linrel import (
    accretive_limit_probe,
    adjoint,
    inverse,
    is_accretive,
    is_m_accretive,
    max_principal_angle,
    purely_multivalued,
    relation_from_graph,
    relation_from_matrix,
    semi_angle,
    shift_invert,
)

C0 = np.array([1.0, -1.0])


def case_one(z):
    return relation_from_graph(2, [(C0, z * C0), ([0, 0], [1, 1])])


# --- construction ----------------------------------------------------------


def test_scalar_graph():
    r = relation_from_graph(1, [([1], [3])])
    assert r.dim == 1 and abs(r.matrix()[0, 0] - 3) < 1e-14


def test_duplicate_pairs_collapse():
    assert relation_from_graph(1, [([1], [3]), ([2], [6])]).dim == 1


def test_empty_input_is_zero_relation():
    r = relation_from_graph(3, [])
    assert r.dim == 0 and r.domain().shape[1] == 0


def test_case_one_relation_structure():
    r = case_one(2 + 1j)
    assert r.dim == 2
    assert r.domain().shape[1] == 1 and r.mul().shape[1] == 1
    assert r.domain().shape[1] + r.mul().shape[1] == r.dim
    assert r.contains(C0, (2 + 1j) * C0 + 5 * np.array([1, 1]))


def test_graph_basis_orthonormal():
    rng = np.random.default_rng(1)
    r = relation_from_graph(3, random_relation(rng, 3, 4))
    assert np.abs(r.basis.conj().T @ r.basis - np.eye(r.dim)).max() < 1e-12


def test_bad_pair_length():
    with pytest.raises(DomainError):
        relation_from_graph(2, [([1], [1])])


# --- adjoint ---------------------------------------------------------------


def test_hermitian_graph_is_selfadjoint():
    rng = np.random.default_rng(2)
    a = cmat(rng, 3)
    h = a + a.conj().T
    r = relation_from_matrix(h)
    assert adjoint(r).equals(r, 1e-10)


def test_purely_multivalued_adjoint():
    r = purely_multivalued(2)
    assert adjoint(r).equals(r)


@pytest.mark.parametrize("seed", range(100))
def test_adjoint_involution_and_inverse_commutation(seed):
    rng = np.random.default_rng(seed)
    n = 1 + seed % 4
    r = relation_from_graph(n, random_relation(rng, n, 1 + seed % (2 * n)))
    assert adjoint(adjoint(r)).equals(r, 1e-10)
    assert adjoint(inverse(r)).equals(inverse(adjoint(r)), 1e-10)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 4), dim=st.integers(0, 8), seed=st.integers(0, 2 ** 32 - 1))
def test_adjoint_is_orthogonal_complement(n, dim, seed):
    rng = np.random.default_rng(seed)
    r = relation_from_graph(n, random_relation(rng, n, min(dim, 2 * n)))
    a = adjoint(r)
    assert r.dim + a.dim == 2 * n
    assert adjoint(a).equals(r, 1e-10)
    if r.dim and a.dim:
        # (y, x') - (x, y') = 0 for (x, y) in R and (x', y') in R*
        assert np.abs(r.ys.conj().T @ a.xs - r.xs.conj().T @ a.ys).max() < 1e-10


def test_adjoint_defining_identity():
    rng = np.random.default_rng(3)
    r = relation_from_graph(3, random_relation(rng, 3, 3))
    a = adjoint(r)
    gram = r.ys.conj().T @ a.xs - r.xs.conj().T @ a.ys  # (y, x') - (x, y') with conjugation on R
    assert np.abs(gram).max() < 1e-12
    assert r.dim + a.dim == 6


# --- shift_invert ------------------------------------------------------------


def test_shift_invert_matrix():
    rng = np.random.default_rng(4)
    a, m = cmat(rng, 3), cmat(rng, 3)
    ok, inv = shift_invert(relation_from_matrix(a), m)
    assert ok and np.abs(inv - np.linalg.inv(a - m)).max() < 1e-10


def test_shift_invert_purely_multivalued():
    rng = np.random.default_rng(5)
    ok, inv = shift_invert(purely_multivalued(3), cmat(rng, 3))
    assert ok and np.abs(inv).max() < 1e-14


@pytest.mark.parametrize("w, bounded", [(1.0, True), (2 + 1j, False), (2 + 1.0001j, True)])
def test_shift_invert_case_one(w, bounded):
    ok, inv = shift_invert(case_one(2 + 1j), w * np.eye(2))
    assert ok is bounded
    if ok:
        # (R - w)^{-1} sends c0 to c0 / (z - w) and kills (1, 1)
        assert np.allclose(inv @ C0, C0 / (2 + 1j - w))
        assert np.allclose(inv @ np.array([1, 1]), 0)


# --- accretivity -------------------------------------------------------------


def test_m_accretive_examples():
    assert not is_m_accretive(relation_from_matrix(np.array([[-1.0]])))
    assert is_m_accretive(purely_multivalued(2))
    assert is_m_accretive(relation_from_matrix(np.array([[1j]])))


def test_accretive_but_not_maximal():
    r = relation_from_graph(2, [([1, 0], [1, 0])])
    assert is_accretive(r) and not is_m_accretive(r)


@pytest.mark.parametrize("seed", range(40))
def test_m_accretive_iff_both_accretive(seed):
    rng = np.random.default_rng(100 + seed)
    n = 2 + seed % 3
    if seed % 3 == 0:
        r = relation_from_matrix(accretive_matrix(rng, n, rank=n - 1))
    elif seed % 3 == 1:
        # accretive operator on a subspace plus multivalued part on its complement
        q, _ = np.linalg.qr(cmat(rng, n))
        u, v = q[:, :1], q[:, 1:]
        a = accretive_matrix(rng, 1)
        pairs = [(u[:, 0], u @ a[:, 0] + v @ cmat(rng, n - 1, 1)[:, 0])]
        pairs += [(np.zeros(n), v[:, k]) for k in range(n - 1)]
        r = relation_from_graph(n, pairs)
    else:
        r = relation_from_graph(n, random_relation(rng, n, n))
    both = is_accretive(r) and is_accretive(adjoint(r))
    assert is_m_accretive(r) == both
    assert is_m_accretive(r) == is_m_accretive(adjoint(r))


@pytest.mark.parametrize("seed", range(100))
def test_kernel_of_m_accretive_equals_kernel_of_adjoint(seed):
    rng = np.random.default_rng(seed)
    n = 2 + seed % 4
    rank = n - 1 - seed % 2 if n > 2 else 1
    t = accretive_matrix(rng, n, rank)
    r = relation_from_matrix(t)
    assert is_m_accretive(r)
    k1 = r.kernel()
    k2 = relation_from_matrix(t.conj().T).kernel()
    assert k1.shape[1] == n - rank
    assert max_principal_angle(k1, k2) < 1e-10


# --- sectors -----------------------------------------------------------------


def test_semi_angle_diagonal():
    rep = semi_angle(relation_from_matrix(np.diag([1, 1 + 1j])))
    assert rep.accretive and rep.m_accretive
    assert abs(rep.semi_angle - math.pi / 4) < 1e-12
    x = rep.witness
    q = x.conj() @ np.diag([1, 1 + 1j]) @ x
    assert abs(abs(np.angle(q)) - math.pi / 4) < 1e-9


def test_semi_angle_hermitian():
    rng = np.random.default_rng(6)
    assert semi_angle(relation_from_matrix(psd_singular(rng, 3, 3) + np.eye(3))).semi_angle < 1e-12


def test_semi_angle_undefined_for_non_accretive():
    rep = semi_angle(relation_from_matrix(np.array([[-1.0]])))
    assert rep.semi_angle is None and not rep.accretive


def test_semi_angle_ignores_multivalued_part():
    rep = semi_angle(case_one(2 + 2j))
    assert abs(rep.semi_angle - math.pi / 4) < 1e-12


def _monte_carlo_angle(t, rng, samples=1_000_000):
    n = t.shape[0]
    best, best_x = 0.0, None
    for _ in range(samples // 100_000):
        x = rng.standard_normal((n, 100_000)) + 1j * rng.standard_normal((n, 100_000))
        q = np.einsum("ij,ik,kj->j", x.conj(), t, x)
        ang = np.abs(np.angle(q))
        k = int(np.argmax(ang))
        if ang[k] > best:
            best, best_x = float(ang[k]), x[:, k]

    def neg(v):
        x = v[:n] + 1j * v[n:]
        return -abs(np.angle(x.conj() @ t @ x))

    res = minimize(neg, np.concatenate([best_x.real, best_x.imag]), method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000})
    return max(best, -res.fun)


@pytest.mark.parametrize("seed", range(3))
def test_semi_angle_matches_monte_carlo(seed):
    rng = np.random.default_rng(200 + seed)
    t = accretive_matrix(rng, 3) + 0.5 * np.eye(3)
    got = semi_angle(relation_from_matrix(t)).semi_angle
    mc = _monte_carlo_angle(t, rng)
    assert mc <= got + 1e-9
    assert got - mc < 1e-3


@pytest.mark.parametrize("seed", range(20))
def test_sectorial_resolvent_bound(seed):
    rng = np.random.default_rng(300 + seed)
    n = 2 + seed % 3
    t = sectorial_matrix(rng, n, alpha=0.2 + 0.05 * seed)
    alpha = semi_angle(relation_from_matrix(t)).semi_angle
    assert alpha <= 0.2 + 0.05 * seed + 1e-12
    for gamma in (alpha + 0.05, 0.5 * (alpha + math.pi / 2), math.pi / 2 - 0.01):
        for theta in np.linspace(gamma + 1e-3, math.pi, 7):
            for rho in (1e-3, 0.3, 1.0, 10.0):
                for sgn in (1, -1):
                    lam = rho * np.exp(1j * sgn * theta)
                    nrm = np.linalg.norm(np.linalg.inv(t - lam * np.eye(n)), 2)
                    assert nrm <= 1.0 / (abs(lam) * math.sin(gamma - alpha)) * (1 + 1e-10)


# --- small-z limits of z (T - z)^{-1} ---------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_limit_probe_kernel_and_range(seed):
    rng = np.random.default_rng(400 + seed)
    n = 4
    t = psd_singular(rng, n, 2) if seed % 2 == 0 else accretive_matrix(rng, n, 2)
    r = relation_from_matrix(t)
    ker = r.kernel()
    h_ker = ker @ cmat(rng, ker.shape[1], 1)[:, 0]
    h_ran = t @ cmat(rng, n, 1)[:, 0]
    beta = 0.3
    for angle in (math.pi / 2 + beta, math.pi, -(math.pi / 2 + beta)):
        seq = accretive_limit_probe(t, h_ker, angle)
        assert np.linalg.norm(seq[-1] + h_ker) < 1e-8 * np.linalg.norm(h_ker)
        seq = accretive_limit_probe(t, h_ran, angle)
        assert np.linalg.norm(seq[-1]) < 1e-8 * np.linalg.norm(h_ran)


def test_limit_probe_resolvent_bound():
    rng = np.random.default_rng(7)
    t = accretive_matrix(rng, 3, 2)
    beta = 0.4
    for k in range(1, 11):
        z = 10.0 ** (-k) * np.exp(1j * (math.pi / 2 + beta))
        assert np.linalg.norm(z * np.linalg.inv(t - z * np.eye(3)), 2) <= 1 / math.sin(beta) + 1e-9


def test_limit_probe_preconditions():
    with pytest.raises(DomainError):
        accretive_limit_probe(np.array([[-1.0]]), np.array([1.0]), math.pi)
    with pytest.raises(DomainError):
        accretive_limit_probe(np.eye(2), np.ones(2), 0.1)


def test_rank_tolerance_constant():
    assert linrel.RANK_TOL == 1e-10


def test_limit_probe_matches_direct_solve_at_moderate_z():
    rng = np.random.default_rng(8)
    t = accretive_matrix(rng, 4, 3)
    h = cmat(rng, 4, 1)[:, 0]
    angle = 0.75 * math.pi
    seq = accretive_limit_probe(t, h, angle, exponents=(0, 1, 2))
    for k, v in zip((0, 1, 2), seq):
        z = 10.0 ** (-k) * np.exp(1j * angle)
        direct = z * np.linalg.solve(t - z * np.eye(4), h)
        assert np.linalg.norm(v - direct) < 1e-11 * np.linalg.norm(h)
