"""Generic extension engine on the half-line fixture and the planar model."""

import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from sectorium import extcore, linrel
from sectorium.errors import DomainError, UniqueExtensionError
from sectorium.extcore import (
    DEFAULT_GRID,
    ExtensionPair,
    Label,
    PointKind,
    admissible,
    check_contract,
    classify_sectorial,
    friedrichs_pair,
    kvn_limit_check,
    kvn_pair,
    qsa_adjoint,
    qsa_pair,
    qsa_scaled_q,
    qsa_w,
    resolvent_correction,
    spectral_point,
    sz_pair,
    w_relation,
    weyl_shift,
)
from sectorium.halfline import OMEGA0, HalflineModel, halfline_eigs, halfline_model, z_for_sqrt
from sectorium.planar import (
    C0,
    PlanarConfig,
    PlanarModel,
    PlanarPair,
    c0_relation,
    g0_profile,
    thresholds,
    to_extension_pair,
    w_scalar,
)

HALF = halfline_model()
CFG = PlanarConfig.from_r(1.0)
PLANAR = PlanarModel(CFG)
TH = thresholds(CFG)
MODELS = {"halfline": HALF, "planar": PLANAR}


def scalar(z):
    return linrel.relation_from_matrix(np.array([[complex(z)]]))


def zero_x_pair(model, Z):
    return ExtensionPair.from_handle(model, Z, None)


@pytest.fixture(params=list(MODELS))
def model(request):
    return MODELS[request.param]


def some_z(model, z):
    return scalar(z) if model.dim_H == 1 else c0_relation(z)


def vectors(model):
    if model.dim_H == 1:
        return np.ones(1), np.ones(1)
    return np.array([1.0, -1.0]), np.array([1.0, 0.3])


# --- contract ----------------------------------------------------------------


def test_contract(model):
    rep = check_contract(model)
    assert rep.q_at_i <= 1e-10 and rep.q_vs_gram <= 1e-8 and rep.re_omega_vs_x0 <= 1e-8


def test_default_grid_size():
    assert len(DEFAULT_GRID) >= 12


# --- admissibility and W ---------------------------------------------------------


def test_friedrichs(model):
    f = friedrichs_pair(model)
    assert admissible(model, f)
    assert classify_sectorial(model, f).label is Label.FRIEDRICHS
    for lam in DEFAULT_GRID:
        sp = spectral_point(model, f, lam)
        assert sp.kind is PointKind.REGULAR and not np.any(sp.inverse)


def test_w_at_minus_i_is_z(model):
    pair = qsa_pair(model, some_z(model, 2 + 0.5j))
    assert w_relation(model, pair, -1j).equals(pair.Z, 1e-12)


@pytest.mark.parametrize("lam", DEFAULT_GRID)
def test_w_with_x0_is_qsa_w(model, lam):
    pair = qsa_pair(model, some_z(model, 2 + 0.5j))
    assert w_relation(model, pair, lam).equals(qsa_w(model, pair.Z, lam), 1e-8)


@pytest.mark.parametrize("lam", DEFAULT_GRID)
def test_zero_x_pair_w(model, lam):
    Z = some_z(model, 1 + 1j)
    pair = zero_x_pair(model, Z)
    expected = Z.add_operator(-model.Q(np.conj(lam)).conj().T)
    assert w_relation(model, pair, lam).equals(expected, 1e-10)


def test_spectral_point_at_minus_i(model):
    invertible = qsa_pair(model, some_z(model, 2.0))
    assert spectral_point(model, invertible, -1j).kind is PointKind.REGULAR
    singular = qsa_pair(model, some_z(model, 0.0))
    assert spectral_point(model, singular, -1j).kind is not PointKind.REGULAR


def test_spectral_point_at_halfline_eigenvalue():
    s = 0.5 + 1j
    pair = qsa_pair(HALF, scalar(z_for_sqrt(s)))
    sp = spectral_point(HALF, pair, s * s)
    assert sp.kind is PointKind.EIGENVALUE and sp.kernel.shape[1] == 1
    assert spectral_point(HALF, pair, s * s + 0.1).kind is PointKind.REGULAR


def test_spectral_point_at_planar_root():
    lam = cmath.exp(0.25j * math.pi)
    from sectorium.planar import z_for_root

    pair = PlanarPair(z_for_root(CFG, lam), g0_profile())
    sp = spectral_point(PLANAR, to_extension_pair(CFG, pair), lam)
    assert sp.kind is PointKind.EIGENVALUE and sp.kernel.shape[1] == 1
    k = sp.kernel[:, 0]
    assert abs(abs(np.vdot(C0, k)) / (np.linalg.norm(C0) * np.linalg.norm(k)) - 1) < 1e-8


def test_characteristic_is_proportional_to_w_scalar():
    pair = PlanarPair(2 + 0.3j, g0_profile())
    ep = to_extension_pair(CFG, pair)
    ratios = [extcore.characteristic(PLANAR, ep, lam) / w_scalar(CFG, pair, lam) for lam in (-1.0, 1 + 2j, -3 - 1j)]
    assert max(abs(r - ratios[0]) for r in ratios) < 1e-10 * abs(ratios[0])


# --- S_z pairs -----------------------------------------------------------------


def halfline_xz_norm(z):
    """``(2/pi) int |S_z(k^2)|^2 dk`` with ``S_z = -(z - i) u / ((u - z)(u - i))``, by mpmath."""
    def s(k):
        u = k * k
        return -(z - 1j) * u / ((u - z) * (u - 1j))
    return float(2 / mp.pi * mp.quad(lambda k: abs(s(k)) ** 2, [0, 1, 10, mp.inf]))


@pytest.mark.parametrize("z", [-1.0, -1 + 1j, -1 - 1j, 1j, -1j])
def test_sz_pair_admissible(model, z):
    p = sz_pair(model, z)
    assert admissible(model, p)
    assert np.abs(p.Z.matrix() + model.Q(z)).max() < 1e-12


@pytest.mark.parametrize("z", [-1.0, -1 + 1j, -1 - 1j, 1j, -1j])
def test_sz_pair_halfline_gram_against_oracle(z):
    p = sz_pair(HALF, z)
    assert abs(p.x_gram[0, 0] - halfline_xz_norm(z)) < 1e-10


def test_sz_pair_tends_to_omega0(model):
    d = model.d0_basis
    for s in (1e-4, 1e-6):
        z = -s * (1 + 0.5j)
        zf = d.conj().T @ sz_pair(model, z).Z.matrix() @ d
        assert np.abs(zf - model.omega0).max() < 50 * math.sqrt(s)


def test_sz_pair_at_minus_i_is_finite(model):
    m = sz_pair(model, -1j).Z.matrix()
    assert np.all(np.isfinite(m))
    near = sz_pair(model, -1j - 1e-7).Z.matrix()
    assert np.abs(m - near).max() < 1e-5


def test_sz_pair_requires_left_half_plane(model):
    with pytest.raises(DomainError):
        sz_pair(model, 1.0)


def test_sz_pair_on_admissibility_boundary():
    # -Q(-i) = e^{i pi/4} and ||X_{-i}||^2 = Re e^{i pi/4}: zero margin
    p = sz_pair(HALF, -1j)
    assert abs(p.Z.matrix()[0, 0] - OMEGA0) < 1e-12
    assert classify_sectorial(HALF, p).label is Label.M_ACCRETIVE_ONLY


def test_sz_resolvent_correction_at_minus_i_uses_z(model):
    p = sz_pair(model, -1 + 0.5j)
    a, b = vectors(model)
    direct = resolvent_correction(model, p, -1j, a, b, -2.0, -3.0, w_inverse=np.linalg.inv(p.Z.matrix()))
    generic = resolvent_correction(model, p, -1j, a, b, -2.0, -3.0)
    assert abs(direct - generic) < 1e-8 * max(1.0, abs(direct))


def test_strong_resolvent_limit_probe(model):
    a, b = vectors(model)
    ref = resolvent_correction(model, kvn_pair(model), -1.0, a, b, -2.0, -3.0)
    near = [abs(resolvent_correction(model, sz_pair(model, -s), -1.0, a, b, -2.0, -3.0) - ref)
            for s in (1e-2, 1e-4, 1e-6)]
    # the approach rate is sqrt(|z|) on the half-line
    assert all(x > y for x, y in zip(near, near[1:])) and near[-1] < 1e-3
    ray = [abs(resolvent_correction(model, sz_pair(model, -s * (1 - 1j)), -1.0, a, b, -2.0, -3.0) - ref)
           for s in (1e-3, 1e-5, 1e-7)]
    assert all(x > y for x, y in zip(ray, ray[1:]))
    far = [abs(resolvent_correction(model, sz_pair(model, -s), -1.0, a, b, -2.0, -3.0))
           for s in (1e2, 1e4, 1e6)]
    assert all(x > y for x, y in zip(far, far[1:]))


# --- Krein-von Neumann ------------------------------------------------------------


def test_kvn_pair_halfline():
    p = kvn_pair(HALF)
    assert abs(p.Z.matrix()[0, 0] - OMEGA0) < 1e-12
    assert admissible(HALF, p)
    assert classify_sectorial(HALF, p).label is Label.KREIN_VON_NEUMANN


def test_kvn_pair_planar():
    p = kvn_pair(PLANAR)
    assert p.Z.contains(C0, 0.5 * TH.omega0 * C0)
    assert p.Z.contains(np.zeros(2), np.array([1.0, 1.0]))
    assert admissible(PLANAR, p)
    assert classify_sectorial(PLANAR, p).label is Label.KREIN_VON_NEUMANN


def test_kvn_limit_cross_check(model):
    assert np.abs(kvn_limit_check(model) - model.omega0).max() < 1e-6


def test_re_omega0_equals_x0_gram(model):
    om = model.omega0
    assert np.abs(0.5 * (om + om.conj().T) - model.x0_gram).max() < 1e-8


def test_unique_extension_error():
    class NoD0(HalflineModel):
        @property
        def d0_basis(self):
            return np.zeros((1, 0), complex)

    with pytest.raises(UniqueExtensionError):
        kvn_pair(NoD0())


# --- classification ----------------------------------------------------------------


def test_domain_outside_d0_is_m_accretive_only():
    pair = zero_x_pair(PLANAR, linrel.relation_from_matrix(3 * np.eye(2)))
    assert admissible(PLANAR, pair)
    assert classify_sectorial(PLANAR, pair).label is Label.M_ACCRETIVE_ONLY


def test_planar_g0_above_threshold_is_sectorial():
    z = TH.re_threshold + 0.5 + 0.3j
    c = classify_sectorial(PLANAR, to_extension_pair(CFG, PlanarPair(z, g0_profile())))
    assert c.label is Label.M_SECTORIAL and c.margin > 0 and c.quasi_selfadjoint


def test_planar_selfadjoint_locus():
    z = TH.re_threshold + 1 + 1j * TH.sa_im
    c = classify_sectorial(PLANAR, to_extension_pair(CFG, PlanarPair(z, g0_profile())))
    assert c.label is Label.NONNEGATIVE_SELFADJOINT


def test_not_admissible():
    pair = qsa_pair(HALF, scalar(0.1))
    assert not admissible(HALF, pair)
    assert classify_sectorial(HALF, pair).label is Label.NOT_ADMISSIBLE


def test_sector_bound_contains_halfline_spectrum():
    for z in (1 + 0.2j, 2 - 1j, 5 + 3j):
        pair = qsa_pair(HALF, scalar(z))
        c = classify_sectorial(HALF, pair)
        bound = c.sector_bound()
        for lam in halfline_eigs(z):
            assert abs(cmath.phase(lam)) <= bound + 1e-6


# --- quasi-selfadjoint calculus ------------------------------------------------------


def test_qsa_w_at_minus_i(model):
    Z = some_z(model, 1.5 - 0.2j)
    assert qsa_w(model, Z, -1j).equals(Z, 1e-14)


def test_qsa_w_at_i_is_finite(model):
    Z = some_z(model, 1.5 - 0.2j)
    near = qsa_w(model, Z, 1j + 1e-7)
    assert qsa_w(model, Z, 1j).equals(near, 1e-6)


def test_qsa_requires_domain_in_d0():
    with pytest.raises(DomainError):
        qsa_w(PLANAR, linrel.relation_from_matrix(np.eye(2)), -1.0)


@pytest.mark.parametrize("seed", range(10))
def test_qsa_adjoint_involution(model, seed):
    rng = np.random.default_rng(seed)
    z = complex(*rng.standard_normal(2) * 3)
    Z = some_z(model, z)
    assert qsa_adjoint(model, qsa_adjoint(model, Z)).equals(Z, 1e-10)


def test_planar_selfadjoint_locus_from_adjoint():
    z = 2.0 + 1j * TH.sa_im
    assert qsa_adjoint(PLANAR, c0_relation(z)).equals(c0_relation(z), 1e-10)
    assert not qsa_adjoint(PLANAR, c0_relation(z + 0.1j)).equals(c0_relation(z + 0.1j), 1e-6)


@pytest.mark.parametrize("s", [0.5 + 1j, -0.3 + 0.4j, 1 + 0.2j])
def test_adjoint_spectrum_is_conjugate(s):
    z = z_for_sqrt(s)
    za = qsa_adjoint(HALF, scalar(z)).matrix()[0, 0]
    a = sorted(halfline_eigs(z), key=lambda v: v.real)
    b = sorted(np.conj(halfline_eigs(za)), key=lambda v: v.real)
    assert len(a) == len(b) and np.allclose(a, b, atol=1e-12)


def test_weyl_shift(model):
    m0 = 0.7 * np.eye(model.dim_H) - 1j * model.gram_gamma(-1j, -1j)
    assert np.abs(weyl_shift(model, m0, -1j) - m0).max() == 0
    for lam in (1j, 2 + 1j, -3 + 0.5j, 0.1 + 0.01j, 1 - 1j, -2 - 3j):
        m = weyl_shift(model, m0, lam)
        im = (m - m.conj().T) / (2j * lam.imag)
        assert np.linalg.eigvalsh(im).min() > 0
        for mu in (-1.0, 3j, 2 - 1j):
            diff = m - weyl_shift(model, m0, mu)
            assert np.abs(diff - (lam - mu) * model.gram_gamma(lam, np.conj(mu))).max() < 1e-8


def test_qsa_scaled_q_matches_formula(model):
    for lam in DEFAULT_GRID:
        lam = complex(lam)
        assert np.abs(qsa_scaled_q(model, lam) - (lam + 1j) / (lam - 1j) * model.Q(lam)).max() < 1e-8


def test_extension_pair_validation():
    Z = scalar(1.0)
    with pytest.raises(DomainError):
        ExtensionPair(Z, Z.domain(), np.zeros((2, 2)), None)
