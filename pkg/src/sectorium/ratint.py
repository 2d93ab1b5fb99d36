"""Rational functions of ``u = rho^2`` and their radial integrals in closed form.

A :class:`Rational` is ``N(u) / prod_m (u - a_m)`` with simple poles. Its
partial fractions ``sum_m A_m / (u - a_m)`` turn each radial integral into a
sum of elementary kernels:

* ``int_0^inf R(k^2) dk = sum_m A_m * i pi / (2 sqrt(a_m))``;
* ``int_0^inf rho R(rho^2) J0(r rho) drho = sum_m A_m (pi i/2) H0^(1)(sqrt(a_m) r)``;
* ``int_0^inf rho R(rho^2) drho = -1/2 sum_m A_m Log(-a_m)`` when ``sum A_m = 0``;
* ``int_0^inf rho R(rho^2) (1 - J0(r rho)) drho = sum_m A_m L(a_m, r)`` with
  ``L(a, r) = -1/2 Log(-a) - (pi i/2) H0^(1)(sqrt(a) r)`` and ``L(0, r) = ln(r/2) + gamma``.

Square roots use the branch with positive imaginary part.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError
from .specfun import EULER_GAMMA, hankel_0

# Poles closer than this (relative) make the partial fractions ill-conditioned.
POLE_SEPARATION = 1e-3


class NearDegenerate(ArithmeticError):
    """Two poles nearly coincide; callers fall back to quadrature."""


def sqrt_upper(a: complex) -> complex:
    """Square root with ``Im >= 0``; raises on the cut ``[0, inf)``."""
    a = complex(a)
    if a.imag == 0 and a.real >= 0:
        raise BranchError(f"sqrt_upper: {a} lies on [0, inf)")
    s = cmath.sqrt(a)
    return s if s.imag > 0 else -s


def log_minus(a: complex) -> complex:
    """Principal ``Log(-a)``, analytic off ``[0, inf)``."""
    return cmath.log(-complex(a))


@dataclass(frozen=True)
class Rational:
    """``num(u) / prod (u - poles)``; ``num`` holds coefficients, highest degree first."""

    num: tuple
    poles: tuple

    @staticmethod
    def make(num, poles) -> "Rational":
        num = np.trim_zeros(np.atleast_1d(np.asarray(num, dtype=complex)), "f")
        if num.size == 0:
            num = np.zeros(1, dtype=complex)
        return Rational(tuple(complex(c) for c in num), tuple(complex(p) for p in poles))

    @staticmethod
    def simple(coef: complex, pole: complex) -> "Rational":
        return Rational.make([coef], [pole])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Rational.make(np.polymul(self.num, other.num), self.poles + other.poles)
        return Rational.make(np.asarray(self.num) * complex(other), self.poles)

    __rmul__ = __mul__

    def __add__(self, other: "Rational") -> "Rational":
        # common denominator: multiset union of the poles, exact matches shared
        only_other = list(other.poles)
        only_self = []
        for p in self.poles:
            if p in only_other:
                only_other.remove(p)
            else:
                only_self.append(p)
        left = np.polymul(self.num, np.poly(only_other) if only_other else [1.0])
        right = np.polymul(other.num, np.poly(only_self) if only_self else [1.0])
        return Rational.make(np.polyadd(left, right), self.poles + tuple(only_other))

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other: "Rational") -> "Rational":
        return self + (-other)

    def conj(self) -> "Rational":
        """The rational function ``u -> conj(R(conj u))`` (equal to ``conj R`` on real u)."""
        return Rational(tuple(c.conjugate() for c in self.num), tuple(p.conjugate() for p in self.poles))

    def times_u(self) -> "Rational":
        return Rational.make(np.polymul(self.num, [1.0, 0.0]), self.poles)

    def over_u(self) -> "Rational":
        return Rational.make(self.num, self.poles + (0j,))

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        den = np.ones_like(u)
        for p in self.poles:
            den = den * (u - p)
        return np.polyval(self.num, u) / den

    def partial_fractions(self) -> list[tuple[complex, complex]]:
        """List of ``(A_m, a_m)``; zero residues are dropped."""
        if len(self.num) - 1 >= len(self.poles):
            raise ValueError("Rational: numerator degree must be below the pole count")
        poles = self.poles
        scale = 1.0 + max((abs(p) for p in poles), default=0.0)
        out = []
        for m, a in enumerate(poles):
            den = 1.0 + 0j
            for l, b in enumerate(poles):
                if l != m:
                    if abs(a - b) < POLE_SEPARATION * scale:
                        raise NearDegenerate(f"poles {a} and {b} nearly coincide")
                    den *= a - b
            res = complex(np.polyval(self.num, a)) / den
            if res != 0:
                out.append((res, a))
        return out


def halfline_integral(rat: Rational) -> complex:
    """``int_0^inf R(k^2) dk``."""
    total = 0j
    for coef, a in rat.partial_fractions():
        if a == 0:
            raise ValueError("halfline_integral: pole at u = 0 is not integrable")
        total += coef * 0.5j * math.pi / sqrt_upper(a)
    return total


def _k_j0(a: complex, r: float) -> complex:
    return 0.5j * math.pi * complex(hankel_0(1, sqrt_upper(a) * r))


def _k_one_minus_j0(a: complex, r: float) -> complex:
    if a == 0:
        return math.log(r / 2.0) + EULER_GAMMA
    return -0.5 * log_minus(a) - _k_j0(a, r)


def planar_integral(rat: Rational, r: float, kind: str) -> complex:
    """Radial integral of ``rho R(rho^2) w(rho)``.

    ``kind`` selects the weight: ``"j0"`` for ``J0(r rho)``, ``"one"`` for 1,
    ``"one_minus_j0"`` for ``1 - J0(r rho)``.
    """
    pf = rat.partial_fractions()
    if kind == "one_minus_j0":
        return sum((c * _k_one_minus_j0(a, r) for c, a in pf), 0j)
    if any(a == 0 for _, a in pf):
        raise ValueError("planar_integral: pole at u = 0 needs the 1 - J0 weight")
    if kind == "j0":
        return sum((c * _k_j0(a, r) for c, a in pf), 0j)
    if kind == "one":
        return sum((-0.5 * c * log_minus(a) for c, a in pf), 0j)
    raise ValueError(f"unknown kind {kind!r}")
