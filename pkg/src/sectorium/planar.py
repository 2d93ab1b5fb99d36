"""Two-center point interactions in the plane.

The symmetric operator is ``-Laplace`` restricted to functions vanishing at
``y1`` and ``y2``; its Friedrichs extension is the free Laplacian. The
boundary space is ``C^2`` and ``D0`` is spanned by ``c0 = (1, -1)``.

Conventions. The Fourier transform is unitary and every radial momentum
integral is written through a profile ``f(rho)``:

* the vector ``gamma(lam) e_k`` has momentum profile ``e^{-i p.y_k} / (rho^2 - lam)``
  and coordinate form ``(pi i/2) H0^(1)(sqrt(lam) |x - y_k|)``;
* ``int conj(a-part) f b-part`` over the plane reduces to
  ``2 pi int_0^inf rho f(rho) (s0 + s1 J0(r rho)) drho`` with ``s0 = b^H a`` and
  ``s1 = conj(b_1) a_2 + conj(b_2) a_1``;
* an operator ``X`` with domain direction ``c0`` is ``X c0 = g`` where
  ``g_hat(p) = (e^{-i p.y1} - e^{-i p.y2}) phi(|p|)``. Profiles are stored as
  ``S(u) = rho phi(rho)`` with ``u = rho^2``; the built-in ``g0`` has
  ``S = i/(u - i)``.

Closed forms come from partial fractions (:mod:`sectorium.ratint`); every
one of them has a momentum-space quadrature counterpart selected by
``OracleMode``.
"""

from __future__ import annotations

import cmath
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import i0e

from . import extcore, linrel
from .errors import DomainError, ModelError, SingularPointError
from .extcore import BoundaryModel, Classification, ExtensionPair, Label, check_off_cut
from .ratint import NearDegenerate, Rational, log_minus, planar_integral, sqrt_upper
from .roots import Rect, Root, find_roots_region
from .specfun import (
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

C0 = np.array([1.0, -1.0], dtype=complex)
CROSS_CHECK_TOL = 1e-8
E_3PI4 = cmath.exp(0.75j * math.pi)
E_PI4 = cmath.exp(0.25j * math.pi)
E_MPI4 = cmath.exp(-0.25j * math.pi)
# Q has a removable singularity at lam = -i; inside this radius it is
# evaluated by the Cauchy integral over a circle of radius _CAUCHY_RADIUS.
_CAUCHY_SWITCH = 1e-3
_CAUCHY_RADIUS = 1e-2
_CAUCHY_NODES = 32

# classification tolerances
KVN_Z_TOL = 1e-10
SA_IM_TOL = 1e-10
BOUNDARY_TOL = 1e-12
G0_DISTANCE_TOL = 1e-8
SINGULAR_W = 1e-12


class OracleMode(str, Enum):
    CLOSED_FORM = "ClosedForm"
    QUADRATURE = "Quadrature"
    CROSS_CHECK = "CrossCheck"


def _point(p) -> tuple[float, float]:
    t = tuple(float(c) for c in p)
    if len(t) != 2 or not all(math.isfinite(c) for c in t):
        raise DomainError(f"expected a finite point in R^2, got {p!r}")
    return t


@dataclass(frozen=True)
class PlanarConfig:
    y1: tuple[float, float] = (-0.5, 0.0)
    y2: tuple[float, float] = (0.5, 0.0)
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    oracle_mode: OracleMode = OracleMode.CLOSED_FORM

    def __post_init__(self):
        object.__setattr__(self, "y1", _point(self.y1))
        object.__setattr__(self, "y2", _point(self.y2))
        object.__setattr__(self, "oracle_mode", OracleMode(self.oracle_mode))
        if not self.r > 0:
            raise DomainError("PlanarConfig: the centers must be distinct")

    @staticmethod
    def from_r(r: float, **kw) -> "PlanarConfig":
        r = float(r)
        if not (r > 0 and math.isfinite(r)):
            raise DomainError("PlanarConfig: r must be positive and finite")
        return PlanarConfig((-0.5 * r, 0.0), (0.5 * r, 0.0), **kw)

    @property
    def r(self) -> float:
        return math.hypot(self.y1[0] - self.y2[0], self.y1[1] - self.y2[1])

    def with_mode(self, mode: OracleMode | str) -> "PlanarConfig":
        return PlanarConfig(self.y1, self.y2, self.quad, OracleMode(mode))

    def quad_spec(self, scale: float | None = None) -> QuadratureSpec:
        return self.quad.with_scale(self.r if scale is None else scale)

    def distances(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != 2:
            raise DomainError("points must have shape (..., 2)")
        d1 = np.hypot(x[..., 0] - self.y1[0], x[..., 1] - self.y1[1])
        d2 = np.hypot(x[..., 0] - self.y2[0], x[..., 1] - self.y2[1])
        return d1, d2


# ---------------------------------------------------------------------------
# radial factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Radial:
    """Radial factor ``f(rho)``; ``rat`` is ``R`` with ``f(rho) = R(rho^2)`` when known."""

    fn: Callable[[np.ndarray], np.ndarray]
    rat: Rational | None = None

    @staticmethod
    def of(rat: Rational) -> "Radial":
        return Radial(lambda rho: rat(rho * rho), rat)

    def times(self, rat: Rational) -> "Radial":
        fn = self.fn
        return Radial(lambda rho: fn(rho) * rat(rho * rho), None if self.rat is None else self.rat * rat)

    def mul(self, other: "Radial") -> "Radial":
        f, g = self.fn, other.fn
        rat = None if self.rat is None or other.rat is None else self.rat * other.rat
        return Radial(lambda rho: f(rho) * g(rho), rat)

    def conj(self) -> "Radial":
        fn = self.fn
        return Radial(lambda rho: np.conj(fn(rho)), None if self.rat is None else self.rat.conj())

    def over_u(self) -> "Radial":
        fn = self.fn
        return Radial(lambda rho: fn(rho) / (rho * rho), None if self.rat is None else self.rat.over_u())

    def minus(self, other: "Radial") -> "Radial":
        f, g = self.fn, other.fn
        rat = None if self.rat is None or other.rat is None else self.rat - other.rat
        return Radial(lambda rho: f(rho) - g(rho), rat)


def _agree(a: complex, b: complex, what: str) -> None:
    if abs(a - b) > CROSS_CHECK_TOL * max(1.0, abs(a)):
        raise ModelError(f"{what}: closed form {a} and quadrature {b} disagree")


def _s_coeffs(a: np.ndarray, b: np.ndarray) -> tuple[complex, complex]:
    s0 = complex(np.vdot(b, a))
    s1 = complex(np.conj(b[0]) * a[1] + np.conj(b[1]) * a[0])
    return s0, s1


def _form_closed(rat: Rational, r: float, s0: complex, s1: complex) -> complex:
    t = s0 + s1
    out = 0j
    if s1 != 0:
        out -= s1 * planar_integral(rat, r, "one_minus_j0")
    if t != 0:
        pf = rat.partial_fractions()
        if abs(sum(c for c, _ in pf)) > 1e-12 * max(1.0, sum(abs(c) for c, _ in pf)):
            raise DomainError("radial integral diverges: profile decays too slowly")
        out += t * planar_integral(rat, r, "one")
    return 2 * math.pi * out


def _form_quad(cfg: PlanarConfig, fn, s0: complex, s1: complex) -> complex:
    t = s0 + s1
    r = cfg.r
    if t == 0:
        def integrand(rho):
            return -s1 * fn(rho) * one_minus_j0(r * rho) * rho
    else:
        def integrand(rho):
            return fn(rho) * (t - s1 * one_minus_j0(r * rho)) * rho
    return 2 * math.pi * complex(integrate_semiaxis(integrand, cfg.quad_spec()))


def form(cfg: PlanarConfig, f: Radial, a, b, mode: OracleMode | None = None) -> complex:
    """``2 pi int_0^inf rho f(rho) (s0 + s1 J0(r rho)) drho`` for boundary vectors ``a``, ``b``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    s0, s1 = _s_coeffs(a, b)
    if s0 == 0 and s1 == 0:
        return 0j
    mode = cfg.oracle_mode if mode is None else mode
    closed = None
    if f.rat is not None and mode is not OracleMode.QUADRATURE:
        if f.rat.is_zero():
            return 0j
        try:
            closed = _form_closed(f.rat, cfg.r, s0, s1)
        except NearDegenerate:
            closed = None
    if closed is not None and mode is OracleMode.CLOSED_FORM:
        return closed
    quad = _form_quad(cfg, f.fn, s0, s1)
    if closed is not None:
        _agree(closed, quad, "radial form")
        return closed
    return quad


def form_matrix(cfg: PlanarConfig, f: Radial, mode: OracleMode | None = None) -> np.ndarray:
    """Matrix ``[j, k] = 2 pi int rho f J_jk`` with ``J = [[1, J0], [J0, 1]]``."""
    e = np.eye(2, dtype=complex)
    d = form(cfg, f, e[0], e[0], mode)
    o = form(cfg, f, e[1], e[0], mode)
    return np.array([[d, o], [o, d]])


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


class TwoCenterProfile(ABC):
    """Momentum profile ``phi`` of ``g = X c0``."""

    is_g0: bool = False

    @abstractmethod
    def s_radial(self) -> Radial:
        """``S(rho) = rho phi(rho)``."""

    def phi(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.s_radial().fn(rho) / rho

    @abstractmethod
    def describe(self) -> dict: ...


@dataclass(frozen=True)
class RationalProfile(TwoCenterProfile):
    """``rho phi(rho) = S(rho^2)`` with ``S`` rational."""

    S: Rational
    is_g0: bool = False
    name: str = "rational"

    def s_radial(self) -> Radial:
        return Radial.of(self.S)

    def describe(self) -> dict:
        return {"kind": "g0" if self.is_g0 else self.name}


def g0_profile() -> RationalProfile:
    """``phi0(rho) = i / (rho (rho^2 - i))``."""
    return RationalProfile(Rational.simple(1j, 1j), True, "g0")


def sz_profile(z: complex) -> RationalProfile:
    """Profile of ``X_z c0``: ``S = -(z - i) u / ((u - z)(u - i))``."""
    z = complex(z)
    return RationalProfile(Rational.make([-(z - 1j), 0.0], [z, 1j]), False, "sz")


@dataclass(frozen=True, eq=False)
class TabulatedProfile(TwoCenterProfile):
    """Profile read from a table ``rho, phi``, interpolated by cubic splines.

    Outside the table: ``rho phi`` is held constant below the first node and
    ``phi`` decays like ``rho^{-decay_exponent}`` beyond the last node.
    """

    rho: tuple
    values: tuple
    decay_exponent: float
    source: str = ""

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        if rho.ndim != 1 or rho.size < 4 or vals.shape != rho.shape:
            raise DomainError("profile table needs at least 4 rows of rho, re, im")
        if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(vals))):
            raise DomainError("profile table contains non-finite values")
        if rho[0] <= 0 or np.any(np.diff(rho) <= 0):
            raise DomainError("profile rho values must be positive and strictly increasing")
        if not (math.isfinite(self.decay_exponent) and self.decay_exponent > 1.0):
            raise DomainError("profile decay_exponent must exceed 1 for a finite norm")

    @cached_property
    def _splines(self):
        rho = np.asarray(self.rho, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        return CubicSpline(rho, vals.real), CubicSpline(rho, vals.imag)

    def phi(self, rho):
        rho = np.asarray(rho, dtype=float)
        lo, hi = self.rho[0], self.rho[-1]
        sr, si = self._splines
        inside = sr(np.clip(rho, lo, hi)) + 1j * si(np.clip(rho, lo, hi))
        first = complex(self.values[0])
        last = complex(self.values[-1])
        with np.errstate(divide="ignore", invalid="ignore"):
            below = first * lo / rho
            above = last * (hi / rho) ** self.decay_exponent
        return np.where(rho < lo, below, np.where(rho > hi, above, inside))

    def s_radial(self) -> Radial:
        return Radial(lambda rho: np.asarray(rho, dtype=float) * self.phi(rho))

    def describe(self) -> dict:
        return {"kind": "table", "source": self.source, "rows": len(self.rho),
                "decay_exponent": self.decay_exponent}

    @staticmethod
    def load(path: str | Path) -> "TabulatedProfile":
        """Read ``rho re im`` rows; ``# decay_exponent: p`` sets the tail exponent."""
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise DomainError(f"cannot read profile file {path}: {exc}") from exc
        decay = None
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                key, sep, val = s[1:].partition(":")
                if sep and key.strip() == "decay_exponent":
                    try:
                        decay = float(val)
                    except ValueError as exc:
                        raise DomainError(f"{path}:{lineno}: bad decay_exponent") from exc
                continue
            parts = s.replace(",", " ").split()
            if len(parts) != 3:
                raise DomainError(f"{path}:{lineno}: expected 'rho re im'")
            try:
                rows.append(tuple(float(p) for p in parts))
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: non-numeric entry") from exc
        if decay is None:
            raise DomainError(f"{path}: missing '# decay_exponent: <p>' header")
        arr = np.asarray(rows, dtype=float).reshape(-1, 3)
        return TabulatedProfile(tuple(arr[:, 0]), tuple(arr[:, 1] + 1j * arr[:, 2]), decay, str(path))


@dataclass(frozen=True)
class PlanarPair:
    """Extension parameter ``<z, g>``; ``z = None`` stands for the Friedrichs extension."""

    z: complex | None
    g: TwoCenterProfile | None = None

    def __post_init__(self):
        if self.z is not None:
            z = complex(self.z)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise DomainError("PlanarPair: z must be finite")
            object.__setattr__(self, "z", z)
            if self.g is None:
                object.__setattr__(self, "g", g0_profile())

    @staticmethod
    def friedrichs() -> "PlanarPair":
        return PlanarPair(None, None)

    @property
    def is_friedrichs(self) -> bool:
        return self.z is None


# ---------------------------------------------------------------------------
# boundary data
# ---------------------------------------------------------------------------


def ln_lambda_i(lam: complex) -> complex:
    """``Ln(lam i) = ln|lam| + i(arg lam - 3 pi/2)``, ``arg lam`` in ``(0, 2 pi)``."""
    return log_minus(lam) - 0.5j * math.pi


def _q_closed_raw(lam: complex, r: float) -> np.ndarray:
    s = sqrt_upper(lam)
    h = complex(hankel_0(1, s * r)) - complex(hankel_0(1, E_3PI4 * r))
    d = -ln_lambda_i(lam)
    o = 1j * math.pi * h
    return (lam - 1j) / (lam + 1j) * math.pi * np.array([[d, o], [o, d]])


def _q_closed(lam: complex, r: float) -> np.ndarray:
    if abs(lam + 1j) >= _CAUCHY_SWITCH:
        return _q_closed_raw(lam, r)
    # removable singularity: trapezoidal Cauchy integral around -i
    acc = np.zeros((2, 2), complex)
    for k in range(_CAUCHY_NODES):
        step = _CAUCHY_RADIUS * cmath.exp(2j * math.pi * k / _CAUCHY_NODES)
        zeta = -1j + step
        acc += _q_closed_raw(zeta, r) * step / (zeta - lam)
    return acc / _CAUCHY_NODES


def q_matrix(cfg: PlanarConfig, lam: complex) -> np.ndarray:
    """``Q(lam) = (lam - i) gamma*(i) gamma(lam)`` in the standard basis."""
    lam = check_off_cut(lam)
    mode = cfg.oracle_mode
    if lam == 1j:
        return np.zeros((2, 2), complex)
    if mode is OracleMode.QUADRATURE:
        return _q_quadrature(cfg, lam)
    closed = _q_closed(lam, cfg.r)
    if mode is OracleMode.CROSS_CHECK:
        quad = _q_quadrature(cfg, lam)
        for a, b in zip(closed.ravel(), quad.ravel()):
            _agree(a, b, "q_matrix")
    return closed


def _q_quadrature(cfg: PlanarConfig, lam: complex) -> np.ndarray:
    f = Radial.of(Rational.make([lam - 1j], [lam, -1j]))
    return form_matrix(cfg, f, OracleMode.QUADRATURE)


def gram_gamma(cfg: PlanarConfig, lam: complex, mu: complex) -> np.ndarray:
    """``[j, k] = (gamma(lam) e_k, gamma(mu) e_j)``."""
    lam = check_off_cut(lam)
    mu = check_off_cut(mu)
    return form_matrix(cfg, Radial.of(Rational.make([1.0], [lam, mu.conjugate()])))


@dataclass(frozen=True)
class PlanarThresholds:
    omega0: complex
    re_threshold: float
    sa_im: float
    g0_norm_sq: float


def omega0(r: float) -> complex:
    """``omega0 = 4 pi (ln(r/2) + gamma + ker r) + 4 pi i (kei r + pi/4)``."""
    ker, kei = kelvin_ker_kei(float(r))
    return complex(4 * math.pi * (math.log(r / 2) + EULER_GAMMA + ker),
                   4 * math.pi * (kei + 0.25 * math.pi))


def thresholds(cfg: PlanarConfig) -> PlanarThresholds:
    om = omega0(cfg.r)
    return PlanarThresholds(om, 0.5 * om.real, 0.5 * om.imag, om.real)


def identity_rhs(r: float) -> float:
    """``ln(r/2) + gamma + ker r``."""
    ker, _ = kelvin_ker_kei(float(r))
    return math.log(r / 2) + EULER_GAMMA + float(ker)


def identity_lhs(r: float, spec: QuadratureSpec | None = None) -> float:
    """``int_0^inf (1 - J0(r rho)) / (rho (rho^4 + 1)) drho`` by quadrature."""
    r = float(r)
    if not r > 0:
        raise DomainError("r must be positive")
    spec = (spec or QuadratureSpec()).with_scale(r)
    return float(integrate_semiaxis(lambda p: one_minus_j0(r * p) / (p * (p ** 4 + 1)), spec).real)


# ---------------------------------------------------------------------------
# g0 and profile norms
# ---------------------------------------------------------------------------


def g0_eval(cfg: PlanarConfig, x):
    """``g0(x) = (pi/2) e^{3 pi i/4} (M0(e^{-i pi/4} d1) - M0(e^{-i pi/4} d2))``."""
    d1, d2 = cfg.distances(x)
    val = 0.5 * math.pi * E_3PI4 * (mod_struve_M0(E_MPI4 * d1) - mod_struve_M0(E_MPI4 * d2))
    return complex(val) if np.ndim(val) == 0 else val


def g0_eval_momentum(cfg: PlanarConfig, x) -> complex:
    """``g0(x) = i int_0^inf (J0(rho d1) - J0(rho d2)) / (rho^2 - i) drho`` by quadrature.

    The ``1/rho^2`` part integrates to ``d2 - d1``; only the faster
    decaying remainder ``i/(rho^2 (rho^2 - i))`` is integrated numerically.
    """
    d1, d2 = (float(v) for v in cfg.distances(np.asarray(x, dtype=float)))
    if d1 == d2:
        return 0j
    spec = cfg.quad_spec(max(d1, d2, 1e-3))

    def rest(p):
        return (one_minus_j0(d2 * p) - one_minus_j0(d1 * p)) / (p * p * (p * p - 1j))

    return 1j * ((d2 - d1) + 1j * complex(integrate_semiaxis(rest, spec)))


def g0_norm_sq_momentum(cfg: PlanarConfig) -> float:
    """``4 pi int (1 - J0(r rho)) / (rho (rho^4 + 1)) drho`` by quadrature."""
    return 4 * math.pi * identity_lhs(cfg.r, cfg.quad)


def g0_norm_sq_coordinate(cfg: PlanarConfig, n_theta: int = 96, n_t: int = 96) -> float:
    """``int |g0|^2`` over the plane by Gauss-Legendre quadrature of the Struve form.

    ``|g0|^2`` is even under both reflections that fix the centers, so the
    integral is four times the integral over the quarter plane nearer ``y1``
    above the axis. That quarter is parametrized in polar coordinates around
    ``y1`` with ``rho = (r/2) t / (1 - t)``, which puts the cone point at
    ``y1`` on the coordinate axis and maps the algebraic tail onto ``t -> 1``.
    """
    r = cfg.r
    half = 0.5 * r
    canon = PlanarConfig.from_r(r)
    xg, wg = np.polynomial.legendre.leggauss(n_theta)
    xt, wt = np.polynomial.legendre.leggauss(n_t)
    total = 0.0
    for lo, hi in ((0.0, 0.5 * math.pi), (0.5 * math.pi, math.pi)):
        th = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
        wth = 0.5 * (hi - lo) * wg
        tmax = 1.0 / (1.0 + np.maximum(np.cos(th), 0.0))
        for tlo_f, thi_f in ((0.0, 0.5), (0.5, 0.9), (0.9, 1.0)):
            ta = tlo_f * tmax
            tb = thi_f * tmax
            t = 0.5 * (tb - ta)[:, None] * xt[None, :] + 0.5 * (tb + ta)[:, None]
            wtt = 0.5 * (tb - ta)[:, None] * wt[None, :]
            rho = half * t / (1.0 - t)
            jac = half / (1.0 - t) ** 2
            pts = np.stack([-half + rho * np.cos(th)[:, None], rho * np.sin(th)[:, None]], axis=-1)
            g = g0_eval(canon, pts)
            total += float(np.sum(wth[:, None] * wtt * np.abs(g) ** 2 * rho * jac))
    return 4.0 * total


def profile_norm_sq(cfg: PlanarConfig, g: TwoCenterProfile) -> float:
    """``||g||^2 = 4 pi int rho |phi|^2 (1 - J0(r rho)) drho``."""
    s = g.s_radial()
    return form(cfg, s.mul(s.conj()).over_u(), C0, C0).real


def profile_inner(cfg: PlanarConfig, g: TwoCenterProfile, h: TwoCenterProfile) -> complex:
    """``(g, h)`` in L2(R^2)."""
    return form(cfg, g.s_radial().mul(h.s_radial().conj()).over_u(), C0, C0)


def profile_distance_sq(cfg: PlanarConfig, g: TwoCenterProfile, h: TwoCenterProfile) -> float:
    d = g.s_radial().minus(h.s_radial())
    return max(0.0, form(cfg, d.mul(d.conj()).over_u(), C0, C0).real)


def is_g0(cfg: PlanarConfig, g: TwoCenterProfile) -> bool:
    if g.is_g0:
        return True
    return profile_distance_sq(cfg, g, g0_profile()) < G0_DISTANCE_TOL ** 2


# ---------------------------------------------------------------------------
# BoundaryModel implementation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlanarX:
    """``X`` with profile ``profile``; defined on ``span c0`` or on all of ``C^2``."""

    profile: TwoCenterProfile
    on_c0: bool = True

    def project(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=complex)
        if self.on_c0:
            return C0 * (np.vdot(C0, a) / 2.0)
        return a


def _cross_radial(s: Radial, lam: complex) -> Radial:
    return s.times(Rational.make([lam + 1j], [lam, -1j]))


def _defect_radial(s: Radial, lam: complex) -> Radial:
    """``(u + i)/((u - lam)(u - i)) - 2 S/(u - lam)``."""
    q = Radial.of(Rational.make([1.0, 1j], [lam, 1j]))
    return q.minus(s.times(Rational.simple(2.0, lam)))


class PlanarModel(BoundaryModel):
    dim_H = 2

    def __init__(self, cfg: PlanarConfig):
        self.cfg = cfg

    def Q(self, lam):
        return q_matrix(self.cfg, lam)

    def gram_gamma(self, lam, mu):
        return gram_gamma(self.cfg, lam, mu)

    @property
    def d0_basis(self):
        return C0[:, None].copy()

    @cached_property
    def _omega0(self) -> complex:
        return omega0(self.cfg.r)

    @property
    def omega0(self):
        return np.array([[self._omega0]])

    @property
    def x0_gram(self):
        return np.array([[complex(self._omega0.real)]])

    @property
    def x0_handle(self):
        return PlanarX(g0_profile(), True)

    def sz_handle(self, z):
        return PlanarX(sz_profile(z), False)

    def x_gram(self, handle: PlanarX, basis):
        s = handle.profile.s_radial()
        f = s.mul(s.conj()).over_u()
        cols = [handle.project(basis[:, j]) for j in range(basis.shape[1])]
        m = len(cols)
        out = np.zeros((m, m), complex)
        for i in range(m):
            for j in range(i, m):
                out[i, j] = form(self.cfg, f, cols[j], cols[i])
                out[j, i] = np.conj(out[i, j])
        return out

    def x_x0_gram(self, handle: PlanarX, basis):
        f = handle.profile.s_radial().mul(g0_profile().s_radial().conj()).over_u()
        return np.array([[form(self.cfg, f, handle.project(basis[:, j]), C0)
                          for j in range(basis.shape[1])]])

    def cross_gx(self, lam, handle: PlanarX):
        lam = check_off_cut(lam)
        if lam == -1j:
            return np.zeros((2, 2), complex)
        f = _cross_radial(handle.profile.s_radial(), lam)
        e = np.eye(2, dtype=complex)
        return np.array([[form(self.cfg, f, handle.project(e[k]), e[j]) for k in range(2)]
                         for j in range(2)])

    def defect_correction(self, lam, nu, handle: PlanarX | None):
        lam = check_off_cut(lam)
        nu = check_off_cut(nu)
        tail = Rational.simple(1.0, nu.conjugate())
        q = Radial.of(Rational.make([1.0, 1j], [lam, 1j]) * tail)
        e = np.eye(2, dtype=complex)
        out = np.array([[form(self.cfg, q, e[k], e[j]) for k in range(2)] for j in range(2)])
        if handle is not None:
            phi = handle.profile.s_radial().times(Rational.simple(2.0, lam) * tail)
            out -= np.array([[form(self.cfg, phi, handle.project(e[k]), e[j]) for k in range(2)]
                             for j in range(2)])
        return out


def planar_model(cfg: PlanarConfig) -> PlanarModel:
    return PlanarModel(cfg)


def c0_relation(z: complex) -> linrel.LinearRelation:
    """``Z`` with domain ``span c0``, ``Z c0 = z c0`` and multivalued part ``c0-perp``."""
    return linrel.relation_from_graph(2, [(C0, complex(z) * C0), ([0, 0], [1, 1])])


def to_extension_pair(cfg: PlanarConfig, pair: PlanarPair) -> ExtensionPair:
    model = PlanarModel(cfg)
    if pair.is_friedrichs:
        return extcore.friedrichs_pair(model)
    return ExtensionPair.from_handle(model, c0_relation(pair.z), PlanarX(pair.g, True), "planar")


# ---------------------------------------------------------------------------
# the scalar w, classification, eigenvalues
# ---------------------------------------------------------------------------


def c0_scalar(m: np.ndarray) -> complex:
    return complex(C0.conj() @ m @ C0)


def cross_scalar(cfg: PlanarConfig, g: TwoCenterProfile, lam: complex) -> complex:
    """``(G(lam) X c0, c0) = 4 pi (lam + i) int rho^2 phi (1 - J0) / ((rho^2 - lam)(rho^2 + i))``."""
    if lam == -1j:
        return 0j
    return form(cfg, _cross_radial(g.s_radial(), lam), C0, C0)


def w_scalar(cfg: PlanarConfig, pair: PlanarPair, lam: complex) -> complex:
    """``(W(lam) c0, c0) = 2z - (Q(conj lam)^H c0, c0) + 2 (G(lam) X c0, c0)``."""
    if pair.is_friedrichs:
        raise DomainError("the Friedrichs pair has no scalar w")
    lam = check_off_cut(lam)
    if lam == -1j:
        return 2 * pair.z
    qs = c0_scalar(q_matrix(cfg, lam.conjugate())).conjugate()
    return 2 * pair.z - qs + 2 * cross_scalar(cfg, pair.g, lam)


def qsa_scalar(cfg: PlanarConfig, z: complex, lam: complex) -> complex:
    """``2z - ((lam + i)/(lam - i)) (Q(lam) c0, c0)`` via ``(lam + i) gamma*(i) gamma(lam)``."""
    return 2 * complex(z) - c0_scalar(extcore.qsa_scaled_q(PlanarModel(cfg), lam))


def z_for_root(cfg: PlanarConfig, lam: complex, g: TwoCenterProfile | None = None) -> complex:
    """The ``z`` for which ``w_scalar((z, g), lam) = 0``."""
    g = g or g0_profile()
    rest = w_scalar(cfg, PlanarPair(0.0, g), lam)
    return -0.5 * rest


def classify(cfg: PlanarConfig, pair: PlanarPair) -> Classification:
    """Label of ``<z, g>`` from ``||g||^2`` against ``2 Re z`` and the g0 loci."""
    if pair.is_friedrichs:
        return Classification(Label.FRIEDRICHS, math.inf, 0.0)
    z = pair.z
    gn = profile_norm_sq(cfg, pair.g)
    two_re = 2 * z.real
    tol = BOUNDARY_TOL * max(1.0, abs(two_re))
    if gn > two_re + tol:
        return Classification(Label.NOT_ADMISSIBLE)
    th = thresholds(cfg)
    g0 = g0_profile()
    same = is_g0(cfg, pair.g)
    if same and abs(z - 0.5 * th.omega0) < KVN_Z_TOL:
        return Classification(Label.KREIN_VON_NEUMANN, math.inf, 0.0, True)
    qsa = same and z.real >= th.re_threshold - tol
    if qsa and abs(z.imag - th.sa_im) < SA_IM_TOL:
        return Classification(Label.NONNEGATIVE_SELFADJOINT, math.inf, 0.0, True)
    if abs(gn - two_re) <= tol:
        return Classification(Label.M_ACCRETIVE_ONLY, None, None, qsa)
    dist = 0.0 if same else profile_distance_sq(cfg, pair.g, g0)
    margin = math.inf if dist == 0.0 else (two_re - gn) / dist
    om = omega_scalar(cfg, pair)
    angle = 0.0 if om == 0 else abs(cmath.phase(om))
    return Classification(Label.M_SECTORIAL, margin, angle, qsa)


def omega_scalar(cfg: PlanarConfig, pair: PlanarPair) -> complex:
    """``omega[c0, c0] = 2z - omega0 - 2((g, g0) - ||g0||^2)``."""
    th = thresholds(cfg)
    if pair.g.is_g0:
        cross = 0j
    else:
        cross = profile_inner(cfg, pair.g, g0_profile()) - th.g0_norm_sq
    return 2 * pair.z - th.omega0 - 2 * cross


def eigenvalues(cfg: PlanarConfig, pair: PlanarPair, region: Rect, residual_tol: float = 1e-10) -> list[Root]:
    """Zeros of ``w_scalar`` in ``region`` minus the sleeve around ``[0, inf)``."""
    if pair.is_friedrichs:
        return []
    return find_roots_region(lambda lam: w_scalar(cfg, pair, lam), region, residual_tol)


# ---------------------------------------------------------------------------
# resolvent kernel
# ---------------------------------------------------------------------------


def free_kernel(lam: complex, x, y):
    """``(i/4) H0^(1)(sqrt(lam) |x - y|)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.hypot(x[..., 0] - y[..., 0], x[..., 1] - y[..., 1])
    if np.any(d == 0):
        raise DomainError("resolvent kernel: x and y must differ")
    return 0.25j * hankel_0(1, sqrt_upper(lam) * d)


def _j0_transform(cfg: PlanarConfig, f: Radial, d) -> np.ndarray:
    """``int_0^inf rho f(rho) J0(rho d) drho`` for an array of distances."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise DomainError("evaluation point coincides with a center")
    if f.rat is not None and cfg.oracle_mode is not OracleMode.QUADRATURE:
        try:
            out = np.zeros(d.shape, complex)
            for c, a in f.rat.partial_fractions():
                if a == 0:
                    raise NearDegenerate("pole at the origin")
                out += c * 0.5j * math.pi * hankel_0(1, sqrt_upper(a) * d)
            return out
        except NearDegenerate:
            pass
    flat = d.ravel()
    vals = [complex(integrate_semiaxis(lambda p, dd=dd: p * f.fn(p) * bessel_j0(dd * p),
                                       cfg.quad_spec(dd))) for dd in flat]
    return np.asarray(vals, complex).reshape(d.shape)


def gamma_c0(cfg: PlanarConfig, lam: complex, x):
    """``(gamma(lam) c0)(x) = (pi i/2)(H0^(1)(sqrt(lam) d1) - H0^(1)(sqrt(lam) d2))``."""
    d1, d2 = cfg.distances(x)
    s = sqrt_upper(lam)
    return 0.5j * math.pi * (hankel_0(1, s * d1) - hankel_0(1, s * d2))


def defect_function(cfg: PlanarConfig, g: TwoCenterProfile, lam: complex, x):
    """``((q(lam) - 2 Phi(lam) X) c0)(x)``; equals ``gamma(lam) c0`` when ``g = g0``."""
    if g.is_g0:
        return gamma_c0(cfg, lam, x)
    d1, d2 = cfg.distances(x)
    f = _defect_radial(g.s_radial(), lam)
    return _j0_transform(cfg, f, d1) - _j0_transform(cfg, f, d2)


def resolvent_kernel(cfg: PlanarConfig, pair: PlanarPair, lam: complex, x, y):
    """Kernel of ``(A - lam)^{-1}``: the free kernel plus ``u(x) v(y) / w(lam)``.

    ``u = (q(lam) - 2 Phi(lam) X) c0`` and ``v(y) = conj((gamma(conj lam) c0)(y))``,
    which equals ``(gamma(lam) c0)(y)``.
    """
    lam = check_off_cut(lam)
    free = free_kernel(lam, x, y)
    if pair.is_friedrichs:
        return free
    w = w_scalar(cfg, pair, lam)
    if abs(w) < SINGULAR_W:
        raise SingularPointError(f"lambda = {lam} is an eigenvalue (|w| = {abs(w):.3e})")
    u = defect_function(cfg, pair.g, lam, x)
    v = gamma_c0(cfg, lam, y)
    return free + u * v / w


# ---------------------------------------------------------------------------
# Krein-von Neumann form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianSum:
    """``h(x) = sum_a c_a exp(-|x - m_a|^2 / (2 s_a^2))``."""

    centers: tuple
    widths: tuple
    coeffs: tuple

    def __post_init__(self):
        m = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        s = np.asarray(self.widths, dtype=float).ravel()
        c = np.asarray(self.coeffs, dtype=complex).ravel()
        if not (m.shape[0] == s.size == c.size):
            raise DomainError("GaussianSum: centers, widths and coeffs must have equal length")
        if np.any(~np.isfinite(m)) or np.any(~(s > 0)) or np.any(~np.isfinite(c)):
            raise DomainError("GaussianSum: widths must be positive and all entries finite")
        object.__setattr__(self, "centers", tuple(map(tuple, m)))
        object.__setattr__(self, "widths", tuple(s))
        object.__setattr__(self, "coeffs", tuple(c))

    @staticmethod
    def zero() -> "GaussianSum":
        return GaussianSum((), (), ())

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1], complex)
        for m, s, c in zip(self.centers, self.widths, self.coeffs):
            out += c * np.exp(-((x[..., 0] - m[0]) ** 2 + (x[..., 1] - m[1]) ** 2) / (2 * s * s))
        return out


def gaussian_dirichlet(h1: GaussianSum, h2: GaussianSum) -> complex:
    """``int grad h1 . conj(grad h2)`` in closed form."""
    total = 0j
    for ma, sa, ca in zip(h1.centers, h1.widths, h1.coeffs):
        for mb, sb, cb in zip(h2.centers, h2.widths, h2.coeffs):
            a, b = sa * sa, sb * sb
            s = a + b
            d2 = (ma[0] - mb[0]) ** 2 + (ma[1] - mb[1]) ** 2
            overlap = 2 * math.pi * a * b / s * math.exp(-d2 / (2 * s))
            total += ca * np.conj(cb) * (2 / s - d2 / (s * s)) * overlap
    return complex(total)


def _gauss_hankel(center, s: float, y, tol: float) -> complex:
    """``int exp(-|x - m|^2/(2 s^2)) conj(H0^(1)(e^{i pi/4} |x - y|)) dx``.

    The angular integral around ``y`` is exact:
    ``2 pi int rho conj(H0^(1)(e^{i pi/4} rho)) exp(-(rho - d)^2/(2 s^2)) i0e(rho d / s^2) drho``.
    """
    d = math.hypot(center[0] - y[0], center[1] - y[1])

    def f(rho):
        h = np.conj(hankel_0(1, E_PI4 * rho))
        return rho * h * np.exp(-((rho - d) ** 2) / (2 * s * s)) * i0e(rho * d / (s * s))

    knots = sorted({0.0, max(0.0, d - 8 * s), d, d + 8 * s, d + 14 * s})
    total = 0j
    for a, b in zip(knots[:-1], knots[1:]):
        if b > a:
            total += complex(integrate_interval(f, a, b, abs_tol=tol, rel_tol=1e-12))
    return 2 * math.pi * total


def _hankel_overlap(cfg: PlanarConfig, h: GaussianSum, tol: float) -> complex:
    """``int h conj(Delta H)`` with ``Delta H = H0^(1)(e^{i pi/4} d1) - H0^(1)(e^{i pi/4} d2)``."""
    total = 0j
    for m, s, c in zip(h.centers, h.widths, h.coeffs):
        total += c * (_gauss_hankel(m, s, cfg.y1, tol) - _gauss_hankel(m, s, cfg.y2, tol))
    return total


def kvn_form(cfg: PlanarConfig, u: tuple[GaussianSum, complex], v: tuple[GaussianSum, complex],
             tol: float = 1e-13) -> complex:
    """The closed form of the Krein-von Neumann extension on ``h + omega g0``-type elements.

    ``A_N[u, v] = int grad h1 . conj(grad h2) - (pi conj(w2)/2) int h1 conj(Delta H)
    - (pi w1/2) int Delta H conj(h2) + Re(omega0) w1 conj(w2)``.
    """
    h1, w1 = u
    h2, w2 = v
    w1, w2 = complex(w1), complex(w2)
    val = gaussian_dirichlet(h1, h2)
    if w2 != 0 and h1.coeffs:
        val -= 0.5 * math.pi * w2.conjugate() * _hankel_overlap(cfg, h1, tol)
    if w1 != 0 and h2.coeffs:
        val -= 0.5 * math.pi * w1 * _hankel_overlap(cfg, h2, tol).conjugate()
    return complex(val + thresholds(cfg).g0_norm_sq * w1 * w2.conjugate())


__all__ = [
    "C0", "OracleMode", "PlanarConfig", "Radial", "TwoCenterProfile", "RationalProfile",
    "TabulatedProfile", "PlanarPair", "PlanarThresholds", "PlanarModel", "PlanarX",
    "GaussianSum", "q_matrix", "gram_gamma", "thresholds", "omega0", "identity_lhs",
    "identity_rhs", "g0_eval", "g0_eval_momentum", "g0_profile", "sz_profile",
    "g0_norm_sq_momentum", "g0_norm_sq_coordinate", "profile_norm_sq", "profile_inner",
    "profile_distance_sq", "is_g0", "w_scalar", "qsa_scalar", "z_for_root", "classify",
    "omega_scalar", "eigenvalues", "free_kernel", "gamma_c0", "defect_function",
    "resolvent_kernel", "gaussian_dirichlet", "kvn_form", "to_extension_pair",
    "planar_model", "c0_relation", "cross_scalar", "ln_lambda_i", "form", "form_matrix",
]
