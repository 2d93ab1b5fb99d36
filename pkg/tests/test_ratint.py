"""Closed-form radial integrals of rational functions against direct quadrature."""

import math

import numpy as np
import pytest

from sectorium.errors import BranchError
from sectorium.ratint import NearDegenerate, Rational, halfline_integral, planar_integral, sqrt_upper
from sectorium.specfun import QuadratureSpec, bessel_j0, integrate_semiaxis, one_minus_j0

POLES = [(-1.0, -1j), (2 + 1j, -1j), (-3 + 0.5j, 1j), (1j, 0.5 - 2j)]


def quad(f, scale=1.0):
    return complex(integrate_semiaxis(f, QuadratureSpec(abs_tol=1e-13, oscillation_scale=scale)))


@pytest.mark.parametrize("a, b", POLES)
def test_halfline_integral(a, b):
    rat = Rational.make([1.0], [a, b])
    assert abs(halfline_integral(rat) - quad(lambda k: rat(k * k))) < 1e-10


@pytest.mark.parametrize("a, b", POLES)
@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_planar_integral_j0(a, b, r):
    rat = Rational.make([1.0], [a, b])
    ref = quad(lambda p: p * rat(p * p) * bessel_j0(r * p), r)
    assert abs(planar_integral(rat, r, "j0") - ref) < 1e-9


@pytest.mark.parametrize("a, b", POLES)
def test_planar_integral_one(a, b):
    rat = Rational.make([1.0], [a, b])
    assert abs(planar_integral(rat, 1.0, "one") - quad(lambda p: p * rat(p * p))) < 1e-9


@pytest.mark.parametrize("r", [0.5, 2.0])
def test_planar_integral_with_pole_at_origin(r):
    # (1 - J0(r rho)) / (rho (rho^4 + 1)) = rho (1 - J0) R(rho^2) with R = 1/(u (u^2 + 1))
    rat = Rational.make([1.0], [0.0, 1j, -1j])
    ref = quad(lambda p: one_minus_j0(r * p) / (p * (p ** 4 + 1)), r)
    assert abs(planar_integral(rat, r, "one_minus_j0") - ref) < 1e-10


def test_addition_shares_equal_poles():
    a = Rational.make([1.0], [1j, -1.0])
    b = Rational.make([2.0], [1j])
    s = a + b
    assert len(s.poles) == 2
    u = np.array([0.3, 2.0, 5.0])
    assert np.allclose(s(u), a(u) + b(u))
    s.partial_fractions()  # no NearDegenerate


def test_near_degenerate_poles_are_reported():
    with pytest.raises(NearDegenerate):
        Rational.make([1.0], [1j, 1j + 1e-6]).partial_fractions()


def test_conj_and_products():
    a = Rational.make([1.0, 2j], [1j, -2.0])
    u = np.array([0.5, 3.0])
    assert np.allclose(a.conj()(u), np.conj(a(u)))
    assert np.allclose((a * a)(u), a(u) ** 2)
    assert np.allclose(a.over_u()(u), a(u) / u)


def test_sqrt_upper_branch():
    assert sqrt_upper(-1.0) == 1j
    assert sqrt_upper(-1j).imag > 0 and abs(sqrt_upper(-1j) ** 2 + 1j) < 1e-15
    with pytest.raises(BranchError):
        sqrt_upper(2.0)
    assert math.isclose(abs(sqrt_upper(4j)), 2.0)
