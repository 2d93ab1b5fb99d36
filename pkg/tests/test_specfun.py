"""Special functions and quadrature against series, mpmath and closed forms."""

import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from sectorium.errors import ConvergenceError, DomainError
from sectorium.specfun import (
    EULER_GAMMA,
    QuadratureSpec,
    bessel_j0,
    hankel_0,
    integrate_interval,
    integrate_semiaxis,
    kelvin_ker_kei,
    mod_struve_M0,
    one_minus_j0,
)

mp.mp.dps = 30
E3PI4 = cmath.exp(0.75j * math.pi)
EMPI4 = cmath.exp(-0.25j * math.pi)

# frozen from mpmath (30 digits) before the build
KER1, KEI1 = 0.286706208728316045954, -0.494994636518719900347
KER2 = -0.0416645139915095322587
M0_EMPI4 = complex(0.586200568615373288850, 0.248568665788584078048)


def j0_series(x, terms=30):
    q = -0.25 * x * x
    term, total = 1.0, 1.0
    for k in range(1, terms):
        term *= q / (k * k)
        total += term
    return total


def first_j0_zero():
    lo, hi = 2.0, 3.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if j0_series(lo) * j0_series(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# --- J0 ---------------------------------------------------------------------


def test_j0_at_zero():
    assert bessel_j0(0.0) == 1.0


def test_j0_first_zero_matches_series_bisection():
    z = first_j0_zero()
    assert abs(z - 2.404825557695773) < 1e-12
    assert abs(bessel_j0(2.404825557695773)) < 1e-12


def test_j0_matches_series_oracle():
    assert abs(bessel_j0(1.0) - j0_series(1.0)) < 1e-13


def test_j0_bounded_and_vectorised():
    x = np.linspace(0, 50, 501)
    v = bessel_j0(x)
    assert v.shape == x.shape and np.all(np.abs(v) <= 1.0)


def test_j0_rejects_nan():
    with pytest.raises(DomainError):
        bessel_j0(float("nan"))


@pytest.mark.parametrize("x", [0.0, 1e-8, 0.05, 0.1, 0.5, 0.999, 1.0, 3.0])
def test_one_minus_j0_no_cancellation(x):
    ref = float(1 - mp.besselj(0, x))
    assert abs(one_minus_j0(x) - ref) <= 4e-16 * ref


# --- Hankel -----------------------------------------------------------------

HANKEL_GRID = [0.3, 2.0 + 1.0j, -1.5 + 0.2j, 7.9j, 8.1 - 3.0j, 12.0 + 0.5j, -20.0 + 1.0j, 1e-3 * E3PI4]


@pytest.mark.parametrize("w", HANKEL_GRID)
def test_hankel_conjugation(w):
    h1 = hankel_0(1, w)
    h2 = hankel_0(2, np.conj(w))
    assert abs(h2 - np.conj(h1)) <= 1e-12 * abs(h1)


@pytest.mark.parametrize("w", HANKEL_GRID)
def test_hankel_against_mpmath(w):
    ref = complex(mp.hankel1(0, mp.mpc(w)))
    assert abs(hankel_0(1, w) - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 8.0, 9.0, 30.0])
def test_hankel_sum_is_twice_j0(x):
    assert abs(hankel_0(1, x) + hankel_0(2, x) - 2 * bessel_j0(x)) < 1e-11


@pytest.mark.parametrize("w", [1e-3 * E3PI4, 1e-4 * E3PI4, 1e-3, 1e-4])
def test_hankel_small_argument_law(w):
    approx = 1 + (2j / math.pi) * (cmath.log(w / 2) + EULER_GAMMA)
    assert abs(hankel_0(1, w) - approx) < 10 * abs(w) ** 2 * (1 + abs(cmath.log(w)))


def test_hankel_errors():
    with pytest.raises(DomainError):
        hankel_0(1, 0.0)
    with pytest.raises(DomainError):
        hankel_0(3, 1.0)


# --- M0 = I0 - L0 ----------------------------------------------------------


def test_m0_at_zero():
    assert mod_struve_M0(0.0) == pytest.approx(1.0, abs=1e-15)


def test_m0_frozen_value_and_integral_representation():
    assert abs(mod_struve_M0(EMPI4) - M0_EMPI4) < 1e-10
    w = mp.mpc(EMPI4)
    integral = (2 / mp.pi) * mp.quad(lambda t: mp.exp(-w * mp.cos(t)), [0, mp.pi / 2])
    assert abs(mod_struve_M0(EMPI4) - complex(integral)) < 1e-10


@pytest.mark.parametrize("rho", [20.0, 35.0, 60.0, 200.0, 1000.0])
def test_m0_decay_along_minus_pi_over_4(rho):
    w = rho * EMPI4
    v = mod_struve_M0(w)
    assert abs(v) <= 1.0 / abs(w)
    assert abs(v - 2 / (math.pi * w)) <= 2.0 / abs(w) ** 3


@pytest.mark.parametrize("mod", [0.3, 3.9, 4.1, 12.0, 39.0, 41.0, 80.0])
@pytest.mark.parametrize("ang", [-0.25 * math.pi, 0.0, 1.0, -1.5, 2.5])
def test_m0_against_mpmath(mod, ang):
    w = mod * cmath.exp(1j * ang)
    if abs(w.real) > 40 and w.real < 0:
        pytest.skip("I0 overflows the comparison scale")
    with mp.workdps(80):  # I0 and L0 cancel to ~35 digits at |w| = 80
        ref = complex(mp.besseli(0, mp.mpc(w)) - mp.struvel(0, mp.mpc(w)))
    assert abs(mod_struve_M0(w) - ref) <= 1e-10 * max(abs(ref), 1.0)


def test_m0_rejects_negative_axis():
    with pytest.raises(DomainError):
        mod_struve_M0(-2.0)


# --- Kelvin -----------------------------------------------------------------


def test_kelvin_frozen_values():
    ker, kei = kelvin_ker_kei(1.0)
    assert abs(ker - KER1) < 1e-12 and abs(kei - KEI1) < 1e-12
    assert abs(kelvin_ker_kei(2.0)[0] - KER2) < 1e-12


@pytest.mark.parametrize("r", list(np.geomspace(0.05, 20.0, 15)))
def test_kelvin_identity_and_mpmath(r):
    ker, kei = kelvin_ker_kei(r)
    h = 0.5j * math.pi * hankel_0(1, E3PI4 * r)
    assert abs(complex(ker, kei) - h) < 1e-11
    assert abs(ker - float(mp.ker(0, r))) < 1e-11
    assert abs(kei - float(mp.kei(0, r))) < 1e-11


@pytest.mark.parametrize("r", [10.0, 15.0, 25.0])
def test_kelvin_decay(r):
    ker, kei = kelvin_ker_kei(r)
    assert abs(ker) + abs(kei) <= math.exp(-r / math.sqrt(2))


def test_kelvin_domain():
    with pytest.raises(DomainError):
        kelvin_ker_kei(0.0)


# --- quadrature ------------------------------------------------------------


def test_semiaxis_exponential():
    assert abs(integrate_semiaxis(lambda x: np.exp(-x)) - 1.0) < 1e-12


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 5.0])
def test_semiaxis_improper_integral_identity(r):
    ker, _ = kelvin_ker_kei(r)
    val = integrate_semiaxis(lambda p: one_minus_j0(r * p) / (p * (p ** 4 + 1)),
                             QuadratureSpec(oscillation_scale=r))
    assert abs(val - (math.log(r / 2) + EULER_GAMMA + ker)) < 1e-8


def test_semiaxis_partial_fractions():
    # rho / ((rho^2 + 1)(rho^2 + i)) = (1/(i - 1)) rho (1/(rho^2 + 1) - 1/(rho^2 + i))
    exact = 0.5 * cmath.log(1j) / (1j - 1)
    val = integrate_semiaxis(lambda p: p / ((p * p + 1) * (p * p + 1j)))
    assert abs(val - exact) < 1e-10


def test_semiaxis_is_deterministic():
    f = lambda p: one_minus_j0(1.3 * p) / (p * (p ** 2 + 1j))
    spec = QuadratureSpec(oscillation_scale=1.3)
    a = integrate_semiaxis(f, spec)
    b = integrate_semiaxis(f, spec)
    assert a == b


def test_semiaxis_reports_nonconvergence():
    with pytest.raises(ConvergenceError):
        integrate_semiaxis(lambda p: 1.0 / (1.0 + p) + 0 * p, QuadratureSpec(max_panels=200))


def test_interval_polynomial_exact():
    assert abs(integrate_interval(lambda x: x ** 5, 0.0, 2.0) - 64.0 / 6.0) < 1e-12


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(oscillation_scale=-1.0)
