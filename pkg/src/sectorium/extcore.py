"""Model-independent extension engine.

An m-accretive extension is parameterized by a pair ``<Z, X>``: an
m-accretive relation ``Z`` on the boundary space ``C^n`` and an operator
``X`` known here only through Gram matrices and an opaque model handle.
A :class:`BoundaryModel` supplies the boundary data (``Q``, gamma-Grams,
``D0``, ``Omega0``, ``X0``-Grams) and evaluates everything that needs the
handle.

Form matrices follow one convention throughout: for a basis ``b`` the
matrix ``F`` of a sesquilinear form ``f`` has ``F[i, j] = f[b_j, b_i]``, so
``f[B s, B t] = t^H F s``.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from . import linrel
from .errors import BranchError, DomainError, ModelError, UniqueExtensionError
from .linrel import LinearRelation

SUBSPACE_TOL = 1e-10
ADMISSIBLE_TOL = 1e-12
# strict positivity threshold for the margin test, relative to the form scale
POSITIVITY_TOL = 1e-12
# margins below this are roundoff of an exact zero (boundary pairs)
MARGIN_TOL = 1e-9


def check_off_cut(lam: complex, tol: float = 1e-14) -> complex:
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise DomainError("spectral parameter must be finite")
    if abs(lam.imag) <= tol and lam.real >= -tol:
        raise BranchError(f"lambda = {lam} lies on the cut [0, inf)")
    return lam


def _herm(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


class BoundaryModel(ABC):
    """Boundary data of a nonnegative operator with a boundary pair.

    ``gram_gamma(lam, mu)`` is the matrix of ``gamma*(mu) gamma(lam)``, entry
    ``[j, k] = (gamma(lam) e_k, gamma(mu) e_j)``; then ``Q(lam) = (lam - i)
    gram_gamma(lam, i)``.
    """

    dim_H: int

    @abstractmethod
    def Q(self, lam: complex) -> np.ndarray: ...

    @abstractmethod
    def gram_gamma(self, lam: complex, mu: complex) -> np.ndarray: ...

    @property
    @abstractmethod
    def d0_basis(self) -> np.ndarray:
        """n x d0 matrix whose columns span D0."""

    @property
    @abstractmethod
    def omega0(self) -> np.ndarray:
        """Form matrix of Omega0 on ``d0_basis``."""

    @property
    @abstractmethod
    def x0_gram(self) -> np.ndarray:
        """``[l, m] = (X0 d_m, X0 d_l)`` on ``d0_basis``."""

    @property
    @abstractmethod
    def x0_handle(self) -> Any: ...

    @abstractmethod
    def sz_handle(self, z: complex) -> Any:
        """Handle of ``X_z = -G*(conj z)``, defined on all of C^n."""

    @abstractmethod
    def x_gram(self, handle: Any, basis: np.ndarray) -> np.ndarray:
        """``[i, j] = (X b_j, X b_i)``."""

    @abstractmethod
    def x_x0_gram(self, handle: Any, basis: np.ndarray) -> np.ndarray:
        """``[l, j] = (X b_j, X0 d_l)`` with ``d`` the columns of ``d0_basis``."""

    @abstractmethod
    def cross_gx(self, lam: complex, handle: Any) -> np.ndarray:
        """n x n matrix ``C`` with ``C e = G(lam) X e`` for ``e`` in the domain of X."""

    @abstractmethod
    def defect_correction(self, lam: complex, nu: complex, handle: Any) -> np.ndarray:
        """Matrix of ``gamma*(nu) (q(lam) - 2 Phi(lam) X)`` on the domain of X."""


@dataclass(frozen=True, eq=False)
class ExtensionPair:
    """A pair ``<Z, X>``; Grams are taken on the orthonormal basis ``dom_basis`` of dom Z."""

    Z: LinearRelation
    dom_basis: np.ndarray
    x_gram: np.ndarray
    x_x0_gram: np.ndarray | None
    x_handle: Any = None
    name: str = ""

    def __post_init__(self):
        d = self.dom_basis.shape[1]
        if self.x_gram.shape != (d, d):
            raise DomainError("ExtensionPair: x_gram size does not match dom(Z)")
        if d and np.linalg.norm(self.x_gram - self.x_gram.conj().T) > 1e-8 * max(1.0, np.abs(self.x_gram).max()):
            raise DomainError("ExtensionPair: x_gram must be Hermitian")

    @staticmethod
    def from_handle(model: BoundaryModel, Z: LinearRelation, handle: Any, name: str = "") -> "ExtensionPair":
        basis = Z.domain()
        if basis.shape[1] == 0 or handle is None:
            d = basis.shape[1]
            return ExtensionPair(Z, basis, np.zeros((d, d), complex),
                                 np.zeros((model.d0_basis.shape[1], d), complex), handle, name)
        xg = _herm(model.x_gram(handle, basis))
        xx0 = model.x_x0_gram(handle, basis) if model.d0_basis.shape[1] else None
        return ExtensionPair(Z, basis, xg, xx0, handle, name)


def friedrichs_pair(model: BoundaryModel) -> ExtensionPair:
    n = model.dim_H
    return ExtensionPair.from_handle(model, linrel.purely_multivalued(n), None, "Friedrichs")


# ---------------------------------------------------------------------------
# admissibility, W(lambda), spectral points
# ---------------------------------------------------------------------------


def _z_form(pair: ExtensionPair) -> np.ndarray:
    """Form matrix of ``(Z e, g)`` on ``pair.dom_basis``."""
    u, a = pair.Z.operator_part()
    # express the relation's own orthonormal domain basis in dom_basis coordinates
    t = pair.dom_basis.conj().T @ u
    f = u.conj().T @ a
    return t @ f @ t.conj().T


def admissible(model: BoundaryModel, pair: ExtensionPair) -> bool:
    """``Z`` m-accretive and ``||X e||^2 <= Re (Z e, e)`` on dom Z."""
    if not linrel.is_m_accretive(pair.Z):
        return False
    if pair.dom_basis.shape[1] == 0:
        return True
    p = _herm(_z_form(pair)) - pair.x_gram
    return float(np.linalg.eigvalsh(p).min()) >= -ADMISSIBLE_TOL


def _cross_matrix(model: BoundaryModel, pair: ExtensionPair, lam: complex) -> np.ndarray:
    if pair.x_handle is None or pair.dom_basis.shape[1] == 0:
        return np.zeros((model.dim_H, model.dim_H), complex)
    return model.cross_gx(lam, pair.x_handle)


def w_relation(model: BoundaryModel, pair: ExtensionPair, lam: complex) -> LinearRelation:
    """``W(lam) = Z - Q(conj lam)^H + 2 G(lam) X``."""
    lam = check_off_cut(lam)
    try:
        qbar = model.Q(lam.conjugate())
    except (ArithmeticError, ValueError) as exc:
        raise ModelError(f"Q evaluation failed at {lam.conjugate()}: {exc}") from exc
    shift = -qbar.conj().T + 2.0 * _cross_matrix(model, pair, lam)
    return pair.Z.add_operator(shift)


class PointKind(str, Enum):
    REGULAR = "Regular"
    EIGENVALUE = "Eigenvalue"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class SpectralPoint:
    kind: PointKind
    inverse: np.ndarray | None = None
    kernel: np.ndarray | None = None


def classify_point(w: LinearRelation) -> SpectralPoint:
    ok, inv = linrel.shift_invert(w, np.zeros((w.n, w.n)))
    if ok:
        return SpectralPoint(PointKind.REGULAR, inverse=inv)
    ker = w.kernel()
    if ker.shape[1]:
        return SpectralPoint(PointKind.EIGENVALUE, kernel=ker)
    return SpectralPoint(PointKind.SINGULAR)


def spectral_point(model: BoundaryModel, pair: ExtensionPair, lam: complex) -> SpectralPoint:
    """Regular point (with ``W^{-1}``), eigenvalue (with ``ker W``) or neither."""
    return classify_point(w_relation(model, pair, lam))


def characteristic(model: BoundaryModel, pair: ExtensionPair, lam: complex) -> complex:
    """Analytic function of ``lam`` vanishing exactly at eigenvalues.

    With the graph basis ``(X_Z, Y_Z)`` of ``Z`` fixed, this is
    ``det(Y_Z + A(lam) X_Z)`` where ``A(lam) = -Q(conj lam)^H + 2 G(lam) X``.
    """
    lam = check_off_cut(lam)
    a = -model.Q(lam.conjugate()).conj().T + 2.0 * _cross_matrix(model, pair, lam)
    return complex(np.linalg.det(pair.Z.ys + a @ pair.Z.xs))


def resolvent_correction(
    model: BoundaryModel,
    pair: ExtensionPair,
    lam: complex,
    a: np.ndarray,
    b: np.ndarray,
    mu: complex,
    nu: complex,
    w_inverse: np.ndarray | None = None,
) -> complex:
    """``(C(lam) f, h)`` for ``f = gamma(mu) a``, ``h = gamma(nu) b``.

    ``C(lam)`` is the difference between the extension's resolvent and that of
    the Friedrichs extension; ``w_inverse`` overrides the computed ``W(lam)^{-1}``.
    """
    lam = complex(lam)
    if w_inverse is None:
        sp = spectral_point(model, pair, lam)
        if sp.kind is not PointKind.REGULAR:
            raise DomainError(f"lambda = {lam} is not a regular point")
        w_inverse = sp.inverse
    if not np.any(w_inverse):
        return 0j
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    handle = pair.x_handle
    d = model.defect_correction(lam, nu, handle)
    g = model.gram_gamma(mu, lam.conjugate())
    return complex(b.conj() @ d @ w_inverse @ g @ a)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


class Label(str, Enum):
    NOT_ADMISSIBLE = "NotAdmissible"
    M_ACCRETIVE_ONLY = "MAccretiveOnly"
    M_SECTORIAL = "MSectorial"
    QUASI_SELFADJOINT = "QuasiSelfadjoint"
    NONNEGATIVE_SELFADJOINT = "NonnegativeSelfadjoint"
    KREIN_VON_NEUMANN = "KreinVonNeumann"
    FRIEDRICHS = "Friedrichs"


@dataclass(frozen=True)
class Classification:
    label: Label
    margin: float | None = None
    omega_semi_angle: float | None = None
    quasi_selfadjoint: bool = False

    @property
    def display(self) -> str:
        if self.quasi_selfadjoint and self.label in (Label.M_SECTORIAL, Label.M_ACCRETIVE_ONLY):
            return f"{Label.QUASI_SELFADJOINT.value}-{self.label.value}"
        return self.label.value

    def sector_bound(self) -> float | None:
        """Semi-angle of a sector containing the spectrum of an m-sectorial pair.

        With ``t`` the tangent of the omega-form semi-angle and
        ``delta = (1 + M)^{-1/2}``, the bound is
        ``arctan((t + delta) / (1 - delta))``.
        """
        if self.label not in (Label.M_SECTORIAL, Label.KREIN_VON_NEUMANN,
                              Label.NONNEGATIVE_SELFADJOINT, Label.FRIEDRICHS):
            return None
        if self.label is not Label.M_SECTORIAL:
            return 0.0
        if self.omega_semi_angle is None or self.margin is None:
            return None
        t = math.tan(self.omega_semi_angle)
        delta = 0.0 if math.isinf(self.margin) else 1.0 / math.sqrt(1.0 + self.margin)
        return math.atan((t + delta) / (1.0 - delta))


def _d0_coordinates(model: BoundaryModel, basis: np.ndarray) -> np.ndarray | None:
    """``T`` with ``basis = D T`` if span(basis) lies in D0, else ``None``."""
    d = model.d0_basis
    if basis.shape[1] == 0:
        return np.zeros((d.shape[1], 0), complex)
    if d.shape[1] == 0:
        return None
    q = linrel.orth(d)
    if not linrel._contained(basis, q, SUBSPACE_TOL):
        return None
    return np.linalg.lstsq(d, basis, rcond=None)[0]


def kvn_pair(model: BoundaryModel) -> ExtensionPair:
    """The pair ``<Z0, X0>``: Omega0 on D0 with multivalued part D0-perp."""
    d = model.d0_basis
    if d.shape[1] == 0:
        raise UniqueExtensionError("D0 = {0}: the m-sectorial extension is unique")
    n = model.dim_H
    u, rmat = np.linalg.qr(d)
    rinv = np.linalg.inv(rmat)
    om = rinv.conj().T @ model.omega0 @ rinv
    perp = linrel.null_space(u.conj().T) if u.shape[1] < n else np.zeros((n, 0))
    cols = np.hstack([
        np.vstack([u, u @ om]),
        np.vstack([np.zeros((n, perp.shape[1])), perp]),
    ])
    z = linrel._from_columns(n, cols)
    basis = z.domain()
    t = u.conj().T @ basis  # basis = u t
    x0u = rinv.conj().T @ model.x0_gram @ rinv
    xg = _herm(t.conj().T @ x0u @ t)
    xx0 = model.x0_gram @ rinv @ t
    return ExtensionPair(z, basis, xg, xx0, model.x0_handle, "KreinVonNeumann")


def kvn_limit_check(model: BoundaryModel, s0: float = 1e-3, levels: int = 6) -> np.ndarray:
    """Extrapolate the form of ``-Q(z)`` on D0 as ``z = -s^2 -> 0``.

    Neville extrapolation in ``s`` over ``s_k = s0 2^{-k}``; returns the
    estimate of the Omega0 form matrix on ``d0_basis``.
    """
    d = model.d0_basis
    ss = [s0 * 2.0 ** (-k) for k in range(levels)]
    vals = [d.conj().T @ (-model.Q(complex(-s * s, 0.0))) @ d for s in ss]
    table = list(vals)
    for m in range(1, levels):
        table = [
            (ss[j] * table[j + 1] - ss[j + m] * table[j]) / (ss[j] - ss[j + m])
            for j in range(levels - m)
        ]
    return table[0]


def sz_pair(model: BoundaryModel, z: complex) -> ExtensionPair:
    """``<Z_z, X_z>`` with ``Z_z = graph(-Q(z))`` and ``X_z = -G*(conj z)``."""
    z = complex(z)
    if z.real > 0:
        raise DomainError("sz_pair: Re z must be <= 0")
    check_off_cut(z)
    try:
        handle = model.sz_handle(z)
    except NotImplementedError as exc:
        raise ModelError(str(exc)) from exc
    return ExtensionPair.from_handle(model, linrel.relation_from_matrix(-model.Q(z)), handle, f"S_{z}")


def classify_sectorial(model: BoundaryModel, pair: ExtensionPair) -> Classification:
    """Classification by the sectoriality criterion with the rewritten condition 3.

    Condition (1): dom Z inside D0. Condition (2): the form
    ``omega[e, g] = (Z e, g) - Omega0[e, g] - 2 ((X - X0) e, X0 g)`` is
    sectorial (closability is automatic in finite dimensions). Condition (3):
    ``Re (Z e, e) - ||X e||^2 >= M ||(X - X0) e||^2`` for some ``M > 0``.
    """
    if not admissible(model, pair):
        return Classification(Label.NOT_ADMISSIBLE)
    basis = pair.dom_basis
    if basis.shape[1] == 0:
        return Classification(Label.FRIEDRICHS, math.inf, 0.0)
    t = _d0_coordinates(model, basis)
    if t is None or pair.x_x0_gram is None:
        return Classification(Label.M_ACCRETIVE_ONLY)

    zf = _z_form(pair)
    x0b = _herm(t.conj().T @ model.x0_gram @ t)
    k = t.conj().T @ pair.x_x0_gram  # [l, j] = (X b_j, X0 b_l)
    om_b = t.conj().T @ model.omega0 @ t
    dm = _herm(pair.x_gram - k - k.conj().T + x0b)
    p = _herm(zf) - pair.x_gram
    omega = zf - om_b - 2.0 * (k - x0b)
    scale = max(1.0, float(np.abs(zf).max()), float(np.abs(pair.x_gram).max()))

    qsa = float(np.abs(dm).max()) <= 1e-10 * scale
    kvn = kvn_pair(model)
    if qsa and _same_on_d0(pair, kvn):
        return Classification(Label.KREIN_VON_NEUMANN, math.inf, 0.0, True)

    margin = _margin(p, dm, scale)
    angle, _ = linrel.numerical_range_support(omega)
    omega_ok = bool(np.linalg.eigvalsh(_herm(omega)).min() >= -ADMISSIBLE_TOL * scale) and angle < math.pi / 2 - 1e-12
    if qsa and qsa_adjoint(model, pair.Z).equals(pair.Z, 1e-9):
        return Classification(Label.NONNEGATIVE_SELFADJOINT, margin, 0.0, True)
    sectorial = margin is not None and margin > 0 and omega_ok
    label = Label.M_SECTORIAL if sectorial else Label.M_ACCRETIVE_ONLY
    return Classification(label, margin, float(angle) if omega_ok else None, qsa)


def _same_on_d0(pair: ExtensionPair, kvn: ExtensionPair) -> bool:
    return pair.Z.equals(kvn.Z, 1e-9)


def _margin(p: np.ndarray, dm: np.ndarray, scale: float) -> float | None:
    """Largest ``M`` with ``P - M Dm >= 0`` (strict on ker Dm); ``None`` if none."""
    vals, vecs = np.linalg.eigh(dm)
    tol = 1e-10 * scale
    ker = vecs[:, vals <= tol]
    rng = vecs[:, vals > tol]
    pk = ker.conj().T @ p @ ker
    if ker.shape[1]:
        if np.linalg.eigvalsh(pk).min() <= POSITIVITY_TOL * scale:
            return None
    if rng.shape[1] == 0:
        return math.inf
    pr = rng.conj().T @ p @ rng
    if ker.shape[1]:
        cross = rng.conj().T @ p @ ker
        pr = pr - cross @ np.linalg.solve(pk, cross.conj().T)
    s = np.diag(1.0 / np.sqrt(vals[vals > tol]))
    m = float(np.linalg.eigvalsh(_herm(s @ pr @ s)).min())
    return m if m > MARGIN_TOL else None


# ---------------------------------------------------------------------------
# quasi-selfadjoint extensions
# ---------------------------------------------------------------------------


def qsa_scaled_q(model: BoundaryModel, lam: complex) -> np.ndarray:
    """``((lam + i)/(lam - i)) Q(lam)``, evaluated as ``(lam + i) gram_gamma(lam, i)``."""
    lam = check_off_cut(lam)
    if lam == -1j:
        return np.zeros((model.dim_H, model.dim_H), complex)
    return (lam + 1j) * model.gram_gamma(lam, 1j)


def _require_in_d0(model: BoundaryModel, Z: LinearRelation) -> None:
    if _d0_coordinates(model, Z.domain()) is None:
        raise DomainError("dom(Z) must lie in D0")


def qsa_w(model: BoundaryModel, Z: LinearRelation, lam: complex) -> LinearRelation:
    """``Z - ((lam + i)/(lam - i)) Q(lam)`` for a quasi-selfadjoint extension."""
    _require_in_d0(model, Z)
    return Z.add_operator(-qsa_scaled_q(model, lam))


def qsa_adjoint(model: BoundaryModel, Z: LinearRelation) -> LinearRelation:
    """Boundary relation of the adjoint extension: ``Z* + 2i gamma*(i) gamma(i)``."""
    _require_in_d0(model, Z)
    return linrel.adjoint(Z).add_operator(2j * model.gram_gamma(1j, 1j))


def qsa_pair(model: BoundaryModel, Z: LinearRelation, name: str = "") -> ExtensionPair:
    """Pair ``<Z, X0>`` for ``Z`` with domain in D0."""
    _require_in_d0(model, Z)
    return ExtensionPair.from_handle(model, Z, model.x0_handle if Z.domain().shape[1] else None, name)


def weyl_shift(model: BoundaryModel, m0_at_minus_i: np.ndarray, lam: complex) -> np.ndarray:
    """``M0(lam) = M0(-i) + ((lam + i)/(lam - i)) Q(lam)``."""
    return np.asarray(m0_at_minus_i, complex) + qsa_scaled_q(model, lam)


# ---------------------------------------------------------------------------
# model contract checks
# ---------------------------------------------------------------------------

DEFAULT_GRID = (
    -1.0, -10.0, -0.1 + 0j, 2j, -2j, 1 + 2j, 1 - 2j, -1 + 2j, -1 - 2j,
    3 + 0.5j, 3 - 0.5j, -5 + 5j,
)


@dataclass
class ContractReport:
    q_at_i: float
    q_vs_gram: float
    re_omega_vs_x0: float
    details: dict = field(default_factory=dict)

    def passed(self, tol: float = 1e-8) -> bool:
        return max(self.q_at_i, self.q_vs_gram, self.re_omega_vs_x0) <= tol


def check_contract(model: BoundaryModel, grid=DEFAULT_GRID) -> ContractReport:
    """Evaluate the BoundaryModel invariants on a grid of spectral parameters."""
    q_i = float(np.abs(model.Q(1j)).max())
    worst = 0.0
    for lam in grid:
        lam = complex(lam)
        diff = model.Q(lam) - (lam - 1j) * model.gram_gamma(lam, 1j)
        worst = max(worst, float(np.abs(diff).max()))
    om = model.omega0
    re_om = _herm(om) if om.size else om
    x0 = _herm(model.x0_gram) if om.size else om
    dev = float(np.abs(re_om - x0).max()) if om.size else 0.0
    return ContractReport(q_i, worst, dev)
