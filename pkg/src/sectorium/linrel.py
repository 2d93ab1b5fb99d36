"""Linear relations in C^n: subspaces of C^n (+) C^n with operator-like algebra.

A relation is stored as an orthonormal basis of its graph, a ``2n x k``
matrix whose top block holds the ``x`` parts and bottom block the ``y``
parts. Every rank decision goes through singular values with the single
relative threshold :data:`RANK_TOL`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

RANK_TOL = 1e-10
ACCRETIVE_TOL = 1e-12

__all__ = [
    "RANK_TOL",
    "LinearRelation",
    "SectorReport",
    "orth",
    "null_space",
    "max_principal_angle",
    "relation_from_graph",
    "relation_from_matrix",
    "adjoint",
    "inverse",
    "shift_invert",
    "is_accretive",
    "is_m_accretive",
    "semi_angle",
    "numerical_range_support",
    "accretive_limit_probe",
]


def orth(a: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the column space, rank cut relative to the top singular value."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    rank = int(np.sum(s > tol * s[0]))
    return u[:, :rank]


def null_space(a: np.ndarray, tol: float = RANK_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis of ker(a); ``scale`` overrides the reference singular value."""
    a = np.asarray(a, dtype=complex)
    ncols = a.shape[1]
    if ncols == 0:
        return np.zeros((0, 0), dtype=complex)
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    ref = scale if scale is not None else (s[0] if s.size else 0.0)
    if ref == 0:
        return np.eye(ncols, dtype=complex)
    rank = int(np.sum(s > tol * ref))
    return vh[rank:].conj().T


def max_principal_angle(u: np.ndarray, v: np.ndarray) -> float:
    """Largest principal angle between span(u) and span(v), both orthonormal.

    Returns ``pi/2`` when the dimensions differ.
    """
    if u.shape[1] != v.shape[1]:
        return math.pi / 2
    if u.shape[1] == 0:
        return 0.0
    s = np.linalg.svd(u.conj().T @ v, compute_uv=False)
    smin = float(np.clip(s.min(), -1.0, 1.0))
    # arcsin of the residual is better conditioned than arccos near 0
    resid = np.linalg.norm(v - u @ (u.conj().T @ v), 2)
    return float(min(math.acos(smin), math.asin(min(1.0, resid))))


def _contained(inner: np.ndarray, outer: np.ndarray, tol: float) -> bool:
    if inner.shape[1] == 0:
        return True
    resid = inner - outer @ (outer.conj().T @ inner)
    return float(np.linalg.norm(resid, 2)) <= tol


@dataclass(frozen=True, eq=False)
class LinearRelation:
    """A linear relation in ``C^n``, held as an orthonormal graph basis."""

    n: int
    basis: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("LinearRelation: n must be >= 1")
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2 or b.shape[0] != 2 * self.n:
            raise DomainError("LinearRelation: basis must have 2n rows")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    # --- blocks -----------------------------------------------------------
    @property
    def xs(self) -> np.ndarray:
        return self.basis[: self.n]

    @property
    def ys(self) -> np.ndarray:
        return self.basis[self.n:]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    # --- derived subspaces ------------------------------------------------
    def domain(self) -> np.ndarray:
        return orth(self.xs) if self.dim else np.zeros((self.n, 0), complex)

    def range(self) -> np.ndarray:
        return orth(self.ys) if self.dim else np.zeros((self.n, 0), complex)

    def _xs_null(self) -> np.ndarray:
        # graph basis is orthonormal, so singular values are measured against 1
        return null_space(self.xs, scale=1.0)

    def mul(self) -> np.ndarray:
        """Multivalued part ``{y : (0, y) in R}``."""
        if not self.dim:
            return np.zeros((self.n, 0), complex)
        c = self._xs_null()
        return orth(self.ys @ c) if c.shape[1] else np.zeros((self.n, 0), complex)

    def kernel(self) -> np.ndarray:
        """``{x : (x, 0) in R}``."""
        if not self.dim:
            return np.zeros((self.n, 0), complex)
        c = null_space(self.ys, scale=1.0)
        return orth(self.xs @ c) if c.shape[1] else np.zeros((self.n, 0), complex)

    def operator_part(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal domain basis ``U`` (n x d) and images ``A`` (n x d).

        ``(U e, A e)`` lies in the relation and ``A e`` is orthogonal to the
        multivalued part.
        """
        if not self.dim:
            z = np.zeros((self.n, 0), complex)
            return z, z
        u, s, vh = np.linalg.svd(self.xs, full_matrices=False)
        d = int(np.sum(s > RANK_TOL))
        if d == 0:
            z = np.zeros((self.n, 0), complex)
            return z, z
        coef = vh[:d].conj().T / s[:d]
        udom = u[:, :d]
        images = self.ys @ coef
        m = self.mul()
        if m.shape[1]:
            images = images - m @ (m.conj().T @ images)
        return udom, images

    def form_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """``(U, F)`` with ``F = U^H A`` so that ``(y, x) = e^H F e`` for ``x = U e``."""
        u, a = self.operator_part()
        return u, u.conj().T @ a

    def is_operator(self) -> bool:
        return self.mul().shape[1] == 0

    def matrix(self) -> np.ndarray:
        """The n x n matrix of an everywhere-defined single-valued relation."""
        u, a = self.operator_part()
        if u.shape[1] != self.n or not self.is_operator():
            raise DomainError("relation is not the graph of an everywhere-defined operator")
        return a @ u.conj().T

    # --- algebra ----------------------------------------------------------
    def add_operator(self, m: np.ndarray) -> "LinearRelation":
        """``{(x, y + M x) : (x, y) in R}``."""
        m = np.asarray(m, dtype=complex)
        return _from_columns(self.n, np.vstack([self.xs, self.ys + m @ self.xs]))

    def scaled(self, c: complex) -> "LinearRelation":
        return _from_columns(self.n, np.vstack([self.xs, c * self.ys]))

    def contains(self, x: np.ndarray, y: np.ndarray, tol: float = 1e-8) -> bool:
        v = np.concatenate([np.asarray(x, complex), np.asarray(y, complex)])
        resid = v - self.basis @ (self.basis.conj().T @ v)
        return float(np.linalg.norm(resid)) <= tol * max(1.0, float(np.linalg.norm(v)))

    def equals(self, other: "LinearRelation", tol: float = 1e-8) -> bool:
        return self.n == other.n and max_principal_angle(self.basis, other.basis) <= tol

    def __repr__(self) -> str:
        return f"LinearRelation(n={self.n}, dim={self.dim})"


def _from_columns(n: int, cols: np.ndarray) -> LinearRelation:
    cols = np.asarray(cols, dtype=complex).reshape(2 * n, -1)
    return LinearRelation(n, orth(cols))


def relation_from_graph(n: int, pairs: Iterable[tuple[Sequence[complex], Sequence[complex]]]) -> LinearRelation:
    """Relation spanned by the given ``(x, y)`` pairs."""
    if n < 1:
        raise DomainError("relation_from_graph: n must be >= 1")
    cols = []
    for x, y in pairs:
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        y = np.atleast_1d(np.asarray(y, dtype=complex))
        if x.shape != (n,) or y.shape != (n,):
            raise DomainError("relation_from_graph: pair components must have length n")
        cols.append(np.concatenate([x, y]))
    if not cols:
        return LinearRelation(n, np.zeros((2 * n, 0), complex))
    return _from_columns(n, np.array(cols).T)


def relation_from_matrix(a: np.ndarray) -> LinearRelation:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    n = a.shape[0]
    return _from_columns(n, np.vstack([np.eye(n), a]))


def purely_multivalued(n: int) -> LinearRelation:
    """``{0} x C^n``."""
    return _from_columns(n, np.vstack([np.zeros((n, n)), np.eye(n)]))


def adjoint(r: LinearRelation) -> LinearRelation:
    """``R* = {(x', y') : (y, x') = (x, y') for all (x, y) in R}``."""
    flipped = np.vstack([r.ys, -r.xs])
    if not r.dim:
        return LinearRelation(r.n, np.eye(2 * r.n, dtype=complex))
    comp = null_space(flipped.conj().T, scale=1.0)
    return LinearRelation(r.n, comp)


def inverse(r: LinearRelation) -> LinearRelation:
    return LinearRelation(r.n, np.vstack([r.ys, r.xs]))


def shift_invert(r: LinearRelation, m: np.ndarray) -> tuple[bool, np.ndarray | None]:
    """Inverse of ``R - M``, if it is an everywhere-defined bounded operator."""
    m = np.asarray(m, dtype=complex)
    b = r.ys - m @ r.xs
    if r.dim != r.n:
        return False, None
    s = np.linalg.svd(b, compute_uv=False)
    if s.size == 0 or s[-1] <= RANK_TOL * max(1.0, s[0]):
        return False, None
    return True, r.xs @ np.linalg.inv(b)


def _herm(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def is_accretive(r: LinearRelation) -> bool:
    if not r.dim:
        return True
    h = _herm(r.xs.conj().T @ r.ys)
    return float(np.linalg.eigvalsh(h).min()) >= -ACCRETIVE_TOL


def is_m_accretive(r: LinearRelation) -> bool:
    """Accretive and ``ran(R + I) = C^n``."""
    if not is_accretive(r):
        return False
    if r.dim < r.n:
        return False
    return orth(r.xs + r.ys).shape[1] == r.n


@dataclass(frozen=True)
class SectorReport:
    accretive: bool
    m_accretive: bool
    semi_angle: float | None
    witness: np.ndarray | None


def _top_angle(f: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest phi in [0, pi/2] with W(F) inside ``{arg <= phi}``, with a witness."""

    def h(phi):
        g = np.exp(-1j * phi) * f
        vals, vecs = np.linalg.eigh((g - g.conj().T) / 2j)
        return vals[-1], vecs[:, -1]

    val0, vec0 = h(0.0)
    if val0 <= 0:
        return 0.0, vec0
    lo, hi = 0.0, math.pi / 2
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if h(mid)[0] > 0:
            lo = mid
        else:
            hi = mid
    return hi, h(hi)[1]


def numerical_range_support(f: np.ndarray) -> tuple[float, np.ndarray | None]:
    """sup |arg (F e, e)| over unit e for an accretive square matrix ``F``."""
    f = np.asarray(f, dtype=complex)
    if f.size == 0:
        return 0.0, None
    up, wu = _top_angle(f)
    low, wl = _top_angle(f.conj())
    return (up, wu) if up >= low else (low, wl.conj())


def semi_angle(r: LinearRelation) -> SectorReport:
    """Semi-angle of the sector containing the numerical range of the operator part.

    The angle is located exactly by bisection on the support function
    ``phi -> lambda_max(Im(e^{-i phi} F))`` instead of by sampling the sphere.
    """
    acc = is_accretive(r)
    macc = is_m_accretive(r)
    if not acc:
        return SectorReport(False, False, None, None)
    u, f = r.form_matrix()
    angle, w = numerical_range_support(f)
    witness = None if w is None else u @ w
    return SectorReport(True, macc, float(angle), witness)


def accretive_limit_probe(
    t: np.ndarray, h: np.ndarray, ray_angle: float, exponents: Sequence[int] = tuple(range(1, 11))
) -> list[np.ndarray]:
    """``z (T - z)^{-1} h`` at ``z_k = 10^{-k} e^{i ray_angle}``.

    For m-accretive ``T`` the values tend to ``-h`` on ``ker T`` and to ``0``
    on the closure of ``ran T`` when the ray lies in the left half-plane.

    Since ``ker T = ker T*`` is orthogonal to ``ran T``, ``T`` is block
    diagonal in an orthonormal basis adapted to ``ker T (+) ran T`` with a
    zero kernel block. Only the invertible range block is solved; a direct
    solve with ``T - z`` would lose about ``eps ||T|| / |z|`` on the kernel.
    """
    t = np.atleast_2d(np.asarray(t, dtype=complex))
    h = np.asarray(h, dtype=complex)
    r = relation_from_matrix(t)
    if not is_m_accretive(r):
        raise DomainError("accretive_limit_probe: T must be m-accretive")
    if not (math.pi / 2 < abs(ray_angle) <= math.pi):
        raise DomainError("accretive_limit_probe: ray must lie in the open left half-plane")
    ker = r.kernel()
    rng = null_space(ker.conj().T) if ker.shape[1] else np.eye(t.shape[0], dtype=complex)
    block = rng.conj().T @ t @ rng
    h_ker = ker @ (ker.conj().T @ h)
    h_rng = rng.conj().T @ h
    eye = np.eye(block.shape[0])
    out = []
    for k in exponents:
        z = 10.0 ** (-k) * complex(math.cos(ray_angle), math.sin(ray_angle))
        out.append(-h_ker + z * (rng @ np.linalg.solve(block - z * eye, h_rng)))
    return out
