"""Half-line fixture: ``-d^2/dx^2`` on ``(0, inf)`` with ``f(0) = f'(0) = 0``.

The boundary map is ``u -> u(0)`` and the gamma-field is
``gamma(lam) = exp(i sqrt(lam) x)`` (``Im sqrt(lam) > 0``). In the sine
transform ``F_s u(k) = sqrt(2/pi) int_0^inf sin(kx) u(x) dx`` the Friedrichs
(Dirichlet) operator is multiplication by ``k^2`` and

    F_s gamma(lam) (k) = c k / (k^2 - lam),   c = sqrt(2/pi).

Frozen closed forms (derivations in docs/halfline.md):

    gamma*(mu) gamma(lam) = i / (sqrt(lam) - conj(sqrt(mu)))
    Q(lam)   = (lam - i) i / (sqrt(lam) - e^{-i pi/4})
    Omega0   = e^{i pi/4},  D0 = C,  ||X0 1||^2 = 1/sqrt(2)

An operator ``X`` is described by its profile ``F_s (X 1)(k) = c S(k^2)`` with
``S`` rational; ``X0`` has ``S = i/(u - i)`` and ``X_z = -G*(conj z)`` has
``S = -(z - i) u / ((u - z)(u - i))``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .extcore import BoundaryModel, check_off_cut
from .ratint import NearDegenerate, Rational, halfline_integral, sqrt_upper
from .specfun import QuadratureSpec, integrate_semiaxis

C2 = 2.0 / math.pi  # c^2
E_MPI4 = cmath.exp(-0.25j * math.pi)
OMEGA0 = cmath.exp(0.25j * math.pi)
X0_NORM_SQ = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class HalflineX:
    """``F_s(X 1) = c S(k^2)``."""

    S: Rational


def _integral(rat: Rational) -> complex:
    """``int_0^inf R(k^2) dk``, closed form unless poles nearly coincide."""
    if rat.is_zero():
        return 0j
    try:
        return halfline_integral(rat)
    except NearDegenerate:
        return complex(integrate_semiaxis(lambda k: rat(k * k), QuadratureSpec(abs_tol=1e-13)))


class HalflineModel(BoundaryModel):
    dim_H = 1

    def Q(self, lam):
        lam = check_off_cut(lam)
        return np.array([[(lam - 1j) * 1j / (sqrt_upper(lam) - E_MPI4)]])

    def gram_gamma(self, lam, mu):
        lam = check_off_cut(lam)
        mu = check_off_cut(mu)
        return np.array([[1j / (sqrt_upper(lam) - sqrt_upper(mu).conjugate())]])

    @property
    def d0_basis(self):
        return np.ones((1, 1), complex)

    @property
    def omega0(self):
        return np.array([[OMEGA0]])

    @property
    def x0_gram(self):
        return np.array([[X0_NORM_SQ + 0j]])

    @property
    def x0_handle(self):
        return HalflineX(Rational.simple(1j, 1j))

    def sz_handle(self, z):
        z = complex(z)
        return HalflineX(Rational.make([-(z - 1j), 0.0], [z, 1j]))

    def x_gram(self, handle, basis):
        b = np.asarray(basis, complex)[0]
        norm = _integral(C2 * handle.S * handle.S.conj()).real
        return np.outer(b.conj(), b) * norm

    def x_x0_gram(self, handle, basis):
        b = np.asarray(basis, complex)[0]
        ip = _integral(C2 * handle.S * self.x0_handle.S.conj())
        return (b * ip)[None, :]

    def cross_gx(self, lam, handle):
        lam = check_off_cut(lam)
        if lam == -1j:
            return np.zeros((1, 1), complex)
        kern = Rational.make([C2 * (lam + 1j), 0.0], [lam, -1j])
        return np.array([[_integral(kern * handle.S)]])

    def defect_correction(self, lam, nu, handle):
        lam = check_off_cut(lam)
        nu = check_off_cut(nu)
        q = Rational.make([1.0, 1j], [lam, 1j])
        f = q - Rational.simple(2.0, lam) * handle.S if handle is not None else q
        kern = Rational.make([C2, 0.0], [nu.conjugate()])
        return np.array([[_integral(kern * f)]])


_MODEL = HalflineModel()


def halfline_model() -> HalflineModel:
    return _MODEL


def halfline_eigs(z: complex) -> list[complex]:
    """All solutions of ``z = ((lam + i)/(lam - i)) Q(lam)`` off ``[0, inf)``.

    With ``s = sqrt(lam)`` the cleared equation is
    ``s^2 + i z s - i (z e^{-i pi/4} - 1) = 0``; roots with ``Im s > 0`` are kept.
    """
    z = complex(z)
    roots = np.roots([1.0, 1j * z, -1j * (z * E_MPI4 - 1.0)])
    out = []
    for s in roots:
        s = complex(s)
        if s.imag > 1e-14 and abs(s - E_MPI4) > 1e-12:
            out.append(s * s)
    return sorted(out, key=lambda w: (w.real, w.imag))


def halfline_eig(z: complex | None) -> complex | None:
    """The eigenvalue of the quasi-selfadjoint extension with scalar ``Z = z``.

    ``None`` stands for the Friedrichs extension (empty domain) or for a ``z``
    without a root. When both roots of the quadratic qualify, the one with the
    smaller real part is returned; :func:`halfline_eigs` gives all of them.
    """
    if z is None:
        return None
    roots = halfline_eigs(z)
    return roots[0] if roots else None


def z_for_sqrt(s: complex) -> complex:
    """The ``z`` for which ``lam = s^2`` is an eigenvalue (``Im s > 0``)."""
    s = complex(s)
    if s.imag <= 0:
        raise DomainError("z_for_sqrt: Im s must be positive")
    lam = s * s
    return (lam + 1j) * 1j / (s - E_MPI4)
