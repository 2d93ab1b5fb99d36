"""Complex special functions and adaptive semi-axis quadrature.

Bessel and Hankel functions of order zero are delegated to ``scipy.special``
(AMOS-backed), with domain checks layered on top. The modified Struve
combination ``I0 - L0`` and the Kelvin pair are built here, as is the
panel-wise Gauss-Kronrod integrator used by every momentum-space oracle.

Every function accepts scalars or numpy arrays; scalar input gives a scalar.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError

EULER_GAMMA = float(np.euler_gamma)

__all__ = [
    "EULER_GAMMA",
    "QuadratureSpec",
    "QuadResult",
    "bessel_j0",
    "one_minus_j0",
    "hankel_0",
    "mod_struve_M0",
    "kelvin_ker_kei",
    "integrate_interval",
    "integrate_semiaxis",
]


def _scalar_or_array(value, was_scalar: bool):
    if was_scalar:
        v = np.asarray(value).reshape(())
        return v.item()
    return value


def _check_finite(w: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(w)):
        raise DomainError(f"{name}: non-finite argument")


# --------------------------------------------------------------------------
# Bessel / Hankel
# --------------------------------------------------------------------------


def bessel_j0(x):
    """Bessel function J0 of a real argument."""
    arr = np.asarray(x, dtype=float)
    _check_finite(arr, "bessel_j0")
    return _scalar_or_array(_sp.j0(arr), arr.ndim == 0)


# 1 - J0(x) = -sum_{k>=1} (-x^2/4)^k / (k!)^2, used for |x| < 1 (14 terms reach 1e-17)
_OMJ0_COEF = np.array([-((-1.0) ** k) / math.factorial(k) ** 2 for k in range(14, 0, -1)] + [0.0])


def one_minus_j0(x):
    """``1 - J0(x)`` without cancellation for small ``x``."""
    arr = np.asarray(x, dtype=float)
    _check_finite(arr, "one_minus_j0")
    q = 0.25 * arr * arr
    out = np.where(np.abs(arr) < 1.0, np.polyval(_OMJ0_COEF, q), 1.0 - _sp.j0(arr))
    return _scalar_or_array(out, arr.ndim == 0)


def hankel_0(kind: int, w):
    """Hankel function of order zero, ``H0^(1)`` or ``H0^(2)``.

    ``arg w`` is taken in ``(-pi, pi]`` (principal branch). ``w == 0`` is the
    logarithmic singularity and raises :class:`DomainError`.
    """
    if kind not in (1, 2):
        raise DomainError(f"hankel_0: kind must be 1 or 2, got {kind!r}")
    arr = np.asarray(w, dtype=complex)
    _check_finite(arr, "hankel_0")
    if np.any(arr == 0):
        raise DomainError("hankel_0: w = 0 is a logarithmic singularity")
    fn = _sp.hankel1 if kind == 1 else _sp.hankel2
    out = fn(0, arr)
    if not np.all(np.isfinite(out)):
        raise DomainError("hankel_0: evaluation overflowed (|Im w| too large)")
    return _scalar_or_array(out, arr.ndim == 0)


# --------------------------------------------------------------------------
# Modified Struve combination I0 - L0
# --------------------------------------------------------------------------

_M0_SERIES_RADIUS = 4.0
_M0_ASYMPTOTIC_RADIUS = 40.0
_M0_SERIES_TERMS = 90
# Power series of I0(w) - L0(w) in x = -w/2: sum_n x^n / Gamma(n/2 + 1)^2.
_M0_SERIES_COEF = np.array(
    [math.exp(-2.0 * math.lgamma(n / 2.0 + 1.0)) for n in range(_M0_SERIES_TERMS)]
)


@lru_cache(maxsize=8)
def _gauss_legendre(n: int, a: float, b: float):
    x, wts = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * wts


def _m0_series(w: np.ndarray) -> np.ndarray:
    x = -0.5 * w
    acc = np.zeros_like(w)
    for c in _M0_SERIES_COEF[::-1]:
        acc = acc * x + c
    return acc


def _m0_integral(w: np.ndarray) -> np.ndarray:
    # I0(w) - L0(w) = (2/pi) int_0^{pi/2} exp(-w sin t) dt, an entire identity.
    n = int(96 + 4 * math.ceil(float(np.max(np.abs(w)))))
    t, wt = _gauss_legendre(n, 0.0, math.pi / 2.0)
    vals = np.exp(-np.multiply.outer(w, np.sin(t)))
    return (2.0 / math.pi) * (vals @ wt)


def _m0_asymptotic(w: np.ndarray) -> np.ndarray:
    # (2/pi) sum_k ((2k-1)!!)^2 / w^(2k+1), truncated near the smallest term.
    inv2 = 1.0 / (w * w)
    term = 1.0 / w
    acc = term.copy()
    kmax = int(0.5 * _M0_ASYMPTOTIC_RADIUS)
    for k in range(1, kmax):
        term = term * inv2 * (2 * k - 1) ** 2
        acc = acc + term
    return (2.0 / math.pi) * acc


def _m0_right_half(w: np.ndarray) -> np.ndarray:
    out = np.empty_like(w)
    aw = np.abs(w)
    small = aw <= _M0_SERIES_RADIUS
    big = (aw > _M0_ASYMPTOTIC_RADIUS) & (np.abs(np.angle(w)) <= 0.26 * math.pi)
    mid = ~(small | big)
    if np.any(small):
        out[small] = _m0_series(w[small])
    if np.any(mid):
        out[mid] = _m0_integral(w[mid])
    if np.any(big):
        out[big] = _m0_asymptotic(w[big])
    return out


def mod_struve_M0(w):
    """The combination ``I0(w) - L0(w)`` of modified Bessel and Struve functions.

    Three regions avoid the cancellation between ``I0`` and ``L0``: a power
    series for ``|w| <= 4``, a Gauss-Legendre rule on the integral
    representation up to ``|w| = 40`` and the asymptotic expansion beyond
    (only near the positive axis, where its exponentially small remainder
    is negligible).
    Arguments with ``Re w < 0`` use the reflection ``M(w) = 2 I0(-w) - M(-w)``.
    """
    arr = np.asarray(w, dtype=complex)
    _check_finite(arr, "mod_struve_M0")
    if np.any((arr.imag == 0) & (arr.real < 0)):
        raise DomainError("mod_struve_M0: |arg w| must be < pi")
    flat = arr.reshape(-1)
    out = np.empty_like(flat)
    left = (flat.real < 0) & (np.abs(flat) > _M0_SERIES_RADIUS)
    right = ~left
    if np.any(right):
        out[right] = _m0_right_half(flat[right])
    if np.any(left):
        neg = -flat[left]
        out[left] = 2.0 * _sp.iv(0, neg) - _m0_right_half(neg)
    if not np.all(np.isfinite(out)):
        raise DomainError("mod_struve_M0: overflow")
    return _scalar_or_array(out.reshape(arr.shape), arr.ndim == 0)


# --------------------------------------------------------------------------
# Kelvin functions
# --------------------------------------------------------------------------

_E3PI4 = complex(math.cos(0.75 * math.pi), math.sin(0.75 * math.pi))


def kelvin_ker_kei(r):
    """Kelvin functions ``(ker r, kei r)`` from ``(pi i/2) H0^(1)(e^{3 pi i/4} r)``."""
    arr = np.asarray(r, dtype=float)
    _check_finite(arr, "kelvin_ker_kei")
    if np.any(arr <= 0):
        raise DomainError("kelvin_ker_kei: r must be positive")
    val = 0.5j * math.pi * _sp.hankel1(0, _E3PI4 * arr)
    return (
        _scalar_or_array(val.real, arr.ndim == 0),
        _scalar_or_array(val.imag, arr.ndim == 0),
    )


# --------------------------------------------------------------------------
# Quadrature
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and panel layout for :func:`integrate_semiaxis`.

    ``oscillation_scale`` is the wavelength parameter ``r`` of integrands such
    as ``1 - J0(r rho)``; panels are cut at multiples of ``pi / r``.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_panels: int = 100_000
    oscillation_scale: float = 1.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("QuadratureSpec: tolerances must be positive")
        if not (isinstance(self.max_panels, int) and self.max_panels > 0):
            raise DomainError("QuadratureSpec: max_panels must be a positive integer")
        if not (self.oscillation_scale > 0 and math.isfinite(self.oscillation_scale)):
            raise DomainError("QuadratureSpec: oscillation_scale must be positive")

    def with_scale(self, scale: float) -> "QuadratureSpec":
        return QuadratureSpec(self.abs_tol, self.rel_tol, self.max_panels, float(scale))


@dataclass(frozen=True)
class QuadResult:
    value: complex | np.ndarray
    error: float
    panels: int


# Gauss-Kronrod 10/21 abscissae and weights (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208015090810, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
# Full 21-point layout: negative abscissae, then positive ones, then the centre.
_NODES = np.concatenate([-_XGK[:-1], _XGK[:-1], [0.0]])
_KW = np.concatenate([_WGK[:-1], _WGK[:-1], [_WGK[-1]]])
_GW = np.zeros(21)
_GW[1:10:2] = _WG
_GW[11:20:2] = _WG
_EPS = np.finfo(float).eps


def _gk21(f: Callable, a: np.ndarray, b: np.ndarray):
    """Apply G10/K21 to panels ``[a_k, b_k]``; returns values (P, m) and errors (P,)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * _NODES[None, :]
    raw = np.asarray(f(x.reshape(-1)), dtype=complex)
    vals = raw.reshape(len(a), 21, -1)
    kron = np.einsum("j,pjm->pm", _KW, vals) * h[:, None]
    gauss = np.einsum("j,pjm->pm", _GW, vals) * h[:, None]
    resabs = np.einsum("j,pjm->pm", _KW, np.abs(vals)) * np.abs(h)[:, None]
    mean = kron / (2.0 * h[:, None])
    resasc = np.einsum("j,pjm->pm", _KW, np.abs(vals - mean[:, None, :])) * np.abs(h)[:, None]
    diff = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(
            (resasc > 0) & (diff > 0),
            resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5),
            diff,
        )
    err = np.maximum(scaled, 50.0 * _EPS * resabs)
    if not np.all(np.isfinite(kron)):
        raise DomainError("integrand returned non-finite values")
    return kron, err.max(axis=1)


def _norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v))) if v.size else 0.0


def integrate_interval(
    f: Callable,
    a: float,
    b: float,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
    max_subdivisions: int = 2000,
    full_output: bool = False,
):
    """Globally adaptive Gauss-Kronrod integration of ``f`` over ``[a, b]``.

    ``f`` maps a 1-D array of abscissae to an array of the same length, or to
    shape ``(N, m)`` for vector-valued integrands.
    """
    res = _adaptive(f, float(a), float(b), abs_tol, rel_tol, max_subdivisions)
    value = res.value
    if value.shape == (1,):
        res = QuadResult(complex(value[0]), res.error, res.panels)
    return res if full_output else res.value


def _adaptive(f, a, b, abs_tol, rel_tol, max_subdivisions, first=None) -> QuadResult:
    if first is None:
        val, err = _gk21(f, np.array([a]), np.array([b]))
        val, err = val[0], float(err[0])
    else:
        val, err = first
    heap = [(-err, 0, a, b, val)]
    total = val.copy()
    total_err = err
    counter = 1
    while total_err > max(abs_tol, rel_tol * _norm(total)):
        if counter >= max_subdivisions:
            raise ConvergenceError(
                f"adaptive quadrature on [{a}, {b}] did not converge "
                f"(error {total_err:.3e} after {counter} subintervals)"
            )
        neg_err, _, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            raise ConvergenceError("adaptive quadrature: interval collapsed")
        vals, errs = _gk21(f, np.array([lo, mid]), np.array([mid, hi]))
        total = total - v + vals[0] + vals[1]
        total_err = total_err + neg_err + errs[0] + errs[1]
        heapq.heappush(heap, (-float(errs[0]), counter, lo, mid, vals[0]))
        heapq.heappush(heap, (-float(errs[1]), counter + 1, mid, hi, vals[1]))
        counter += 2
    # recompute sums in a fixed order so results do not depend on heap history
    pieces = sorted(heap, key=lambda item: item[2])
    total = np.sum(np.array([p[4] for p in pieces]), axis=0)
    total_err = float(sum(-p[0] for p in pieces))
    return QuadResult(total, total_err, len(pieces))


def _wynn_epsilon(seq: np.ndarray) -> np.ndarray:
    """Wynn epsilon extrapolation of a sequence of partial sums (rows)."""
    n = len(seq)
    prev = np.zeros_like(seq[0])
    e_prev = [prev] * (n + 1)
    e_cur = list(seq)
    best = seq[-1]
    for k in range(1, n):
        nxt = []
        for j in range(len(e_cur) - 1):
            d = e_cur[j + 1] - e_cur[j]
            if np.any(d == 0):
                return best
            nxt.append(e_prev[j + 1] + 1.0 / d)
        e_prev, e_cur = e_cur, nxt
        if k % 2 == 0 and e_cur:
            best = e_cur[-1]
    return best


# Panels whose contributions alternate in sign for this many consecutive
# steps are treated as an alternating series and handed to the epsilon table.
_ALTERNATION_RUN = 16
_BATCH0 = 32
_BATCH_MAX = 1024


def integrate_semiaxis(f: Callable, spec: QuadratureSpec | None = None, full_output: bool = False):
    """Integrate ``f`` over ``(0, inf)``.

    The axis is cut into panels of width ``pi / spec.oscillation_scale``,
    each integrated by Gauss-Kronrod 10/21 and refined adaptively where the
    local error estimate is too large. Three stopping rules apply in turn:

    * alternating panel contributions are accelerated by the epsilon
      algorithm and accepted once two successive extrapolants agree;
    * otherwise, once the alternating component of the panel sequence is
      below ``abs_tol/100`` the remaining tail is integrated on doubling
      panels until a panel falls below the tolerance over ten;
    * exceeding ``spec.max_panels`` raises :class:`ConvergenceError`.
    """
    spec = spec or QuadratureSpec()
    width = math.pi / spec.oscillation_scale
    panel_tol = spec.abs_tol / 50.0
    contributions: list[np.ndarray] = []
    errors: list[float] = []
    k0 = 0
    batch = _BATCH0
    tail_start = None
    extrapolated = None
    last_extrap = None
    while True:
        if k0 >= spec.max_panels:
            raise ConvergenceError(
                f"integrate_semiaxis: max_panels={spec.max_panels} exhausted"
            )
        ks = np.arange(k0, min(k0 + batch, spec.max_panels), dtype=float)
        a, b = ks * width, (ks + 1.0) * width
        vals, errs = _gk21(f, a, b)
        for j in range(len(ks)):
            if errs[j] > max(panel_tol, 0.1 * spec.rel_tol * _norm(vals[j])):
                res = _adaptive(f, a[j], b[j], panel_tol, 0.1 * spec.rel_tol, 4000,
                                first=(vals[j], float(errs[j])))
                vals[j], errs[j] = res.value, res.error
        contributions.extend(vals)
        errors.extend(errs.tolist())
        k0 += len(ks)
        batch = min(2 * batch, _BATCH_MAX)

        p = np.array(contributions[-(_ALTERNATION_RUN + 2):])
        if len(contributions) < 2 * _BATCH0:
            continue
        # epsilon acceleration for alternating tails
        dots = np.real(np.sum(p[1:] * np.conj(p[:-1]), axis=1))
        if np.all(dots < 0):
            partial = np.cumsum(np.array(contributions), axis=0)[-(_ALTERNATION_RUN + 1):]
            e1 = _wynn_epsilon(partial[:-1])
            e2 = _wynn_epsilon(partial[1:])
            tol = max(spec.abs_tol, spec.rel_tol * _norm(e2)) / 10.0
            if _norm(e2 - e1) < tol and (last_extrap is None or _norm(e2 - last_extrap) < 10 * tol):
                extrapolated = e2
                break
            last_extrap = e2
        # is the alternating component negligible?
        alt = 0.25 * (2.0 * p[1:-1] - p[:-2] - p[2:])
        if _norm(alt) < spec.abs_tol / 100.0:
            tail_start = k0 * width
            break

    if extrapolated is not None:
        total = extrapolated
        err_est = float(np.sum(errors)) + _norm(extrapolated - last_extrap) if last_extrap is not None else float(np.sum(errors))
        n_panels = len(contributions)
    else:
        total = np.sum(np.array(contributions), axis=0)
        err_est = float(np.sum(errors))
        n_panels = len(contributions)
        lo = tail_start
        while True:
            if n_panels >= spec.max_panels:
                raise ConvergenceError(
                    f"integrate_semiaxis: max_panels={spec.max_panels} exhausted in the tail"
                )
            hi = 2.0 * lo
            res = _adaptive(f, lo, hi, panel_tol, 0.1 * spec.rel_tol, 20000)
            total = total + res.value
            err_est += res.error
            n_panels += 1
            if _norm(res.value) < max(spec.abs_tol, spec.rel_tol * _norm(total)) / 10.0:
                err_est += _norm(res.value)
                break
            lo = hi
            if not math.isfinite(lo):
                raise ConvergenceError("integrate_semiaxis: tail does not decay")
    if err_est > max(spec.abs_tol, spec.rel_tol * _norm(total)):
        raise ConvergenceError(
            f"integrate_semiaxis: error estimate {err_est:.3e} above tolerance"
        )
    value = total[0] if total.shape == (1,) else total
    if isinstance(value, np.generic):
        value = complex(value)
    return QuadResult(value, err_est, n_panels) if full_output else value
