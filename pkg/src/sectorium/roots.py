"""Zeros of analytic functions in rectangles by the argument principle.

The winding number of ``f`` along a rectangle boundary is accumulated from
phase increments, sampling each edge adaptively until every increment is
below ``pi/2``. Rectangles are split into quadrants until each holds a
single zero, which Newton's method (central-difference derivative) refines.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError

# Split point for subdivisions, deliberately off-centre so that symmetric
# zeros do not land on the new edges.
_SPLIT = 0.4871
SLEEVE = 1e-6


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise DomainError(f"degenerate rectangle {self}")

    @staticmethod
    def parse(text: str) -> "Rect":
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise DomainError("region must be 'xmin,xmax,ymin,ymax'")
        return Rect(*parts)

    @property
    def corners(self) -> list[complex]:
        return [complex(self.x0, self.y0), complex(self.x1, self.y0),
                complex(self.x1, self.y1), complex(self.x0, self.y1)]

    @property
    def size(self) -> float:
        return max(self.x1 - self.x0, self.y1 - self.y0)

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (self.x0 - pad <= z.real <= self.x1 + pad) and (self.y0 - pad <= z.imag <= self.y1 + pad)

    def distance_to_cut(self) -> float:
        """Distance from the closed rectangle to ``[0, inf)``."""
        dx = max(0.0, -self.x1)
        dy = 0.0 if self.y0 <= 0 <= self.y1 else min(abs(self.y0), abs(self.y1))
        if self.x1 < 0:
            return math.hypot(dx, dy)
        return dy

    def quadrants(self) -> list["Rect"]:
        xm = self.x0 + _SPLIT * (self.x1 - self.x0)
        ym = self.y0 + _SPLIT * (self.y1 - self.y0)
        return [Rect(self.x0, xm, self.y0, ym), Rect(xm, self.x1, self.y0, ym),
                Rect(xm, self.x1, ym, self.y1), Rect(self.x0, xm, ym, self.y1)]


def split_off_cut(rect: Rect, sleeve: float = SLEEVE) -> list[Rect]:
    """Cover ``rect`` minus a sleeve around ``[0, inf)`` by admissible rectangles."""
    if rect.distance_to_cut() >= sleeve:
        return [rect]
    pieces = []
    if rect.x0 < -sleeve:
        pieces.append(Rect(rect.x0, min(rect.x1, -sleeve), rect.y0, rect.y1))
    xs = max(rect.x0, -sleeve)
    if rect.x1 > xs:
        if rect.y1 > sleeve:
            pieces.append(Rect(xs, rect.x1, max(rect.y0, sleeve), rect.y1))
        if rect.y0 < -sleeve:
            pieces.append(Rect(xs, rect.x1, rect.y0, min(rect.y1, -sleeve)))
    return pieces


@dataclass(frozen=True)
class Root:
    lam: complex
    residual: float
    winding: int

    @property
    def winding_verified(self) -> bool:
        return self.winding == 1


class _Evaluator:
    def __init__(self, f: Callable[[complex], complex], tiny: float):
        self.f = f
        self.cache: dict[complex, complex] = {}
        self.tiny = tiny

    def __call__(self, z: complex) -> complex:
        v = self.cache.get(z)
        if v is None:
            v = complex(self.f(z))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ConvergenceError(f"function not finite at {z}")
            self.cache[z] = v
        return v


def _segment_phase(ev: _Evaluator, a: complex, b: complex, start: int, max_points: int) -> float:
    ts = list(np.linspace(0.0, 1.0, start + 1))
    vals = [ev(a + (b - a) * t) for t in ts]
    total_points = len(ts)
    while True:
        new_ts, new_vals = [ts[0]], [vals[0]]
        refined = False
        for k in range(len(ts) - 1):
            v0, v1 = vals[k], vals[k + 1]
            if abs(v0) <= ev.tiny or abs(v1) <= ev.tiny:
                raise ConvergenceError("zero of the function on the contour")
            if abs(cmath.phase(v1 / v0)) >= math.pi / 2:
                tm = 0.5 * (ts[k] + ts[k + 1])
                new_ts.append(tm)
                new_vals.append(ev(a + (b - a) * tm))
                refined = True
                total_points += 1
            new_ts.append(ts[k + 1])
            new_vals.append(v1)
        ts, vals = new_ts, new_vals
        if not refined:
            break
        if total_points > max_points:
            raise ConvergenceError("contour sampling did not resolve the phase")
    return sum(cmath.phase(vals[k + 1] / vals[k]) for k in range(len(vals) - 1))


def _winding(ev: _Evaluator, pts: list[complex], start: int = 16, max_points: int = 20000) -> int:
    total = 0.0
    for k in range(len(pts)):
        total += _segment_phase(ev, pts[k], pts[(k + 1) % len(pts)], start, max_points)
    w = total / (2 * math.pi)
    n = round(w)
    if abs(w - n) > 1e-3:
        raise ConvergenceError(f"non-integer winding {w}")
    return int(n)


def winding_number(f: Callable[[complex], complex], rect: Rect, tiny: float = 0.0) -> int:
    return _winding(_Evaluator(f, tiny), rect.corners)


def _circle(center: complex, radius: float, m: int = 16) -> list[complex]:
    return [center + radius * cmath.exp(2j * math.pi * k / m) for k in range(m)]


def _newton(f, z0: complex, cell: Rect, tol: float, max_iter: int = 60) -> tuple[complex, float] | None:
    z = z0
    pad = 0.1 * cell.size
    fz = complex(f(z))
    for _ in range(max_iter):
        h = 1e-7 * max(cell.size, abs(z) * 1e-3, 1e-12)
        d = (complex(f(z + h)) - complex(f(z - h))) / (2 * h)
        if d == 0:
            return None
        step = fz / d
        z = z - step
        if not cell.contains(z, pad):
            return None
        fz = complex(f(z))
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return z, abs(fz)


def find_roots(
    f: Callable[[complex], complex],
    rect: Rect,
    residual_tol: float = 1e-10,
    max_depth: int = 16,
) -> list[Root]:
    """All zeros of ``f`` inside ``rect``, each with a local winding check.

    Raises :class:`ConvergenceError` when the number of refined zeros
    (counted with their local winding) differs from the winding number of
    the boundary.
    """
    ev = _Evaluator(f, 0.0)
    total = _winding(ev, rect.corners)
    if total < 0:
        raise ConvergenceError(f"negative winding {total}: f has poles in the region")
    roots: list[Root] = []
    stack = [(rect, total, 0)]
    while stack:
        cell, count, depth = stack.pop()
        if count == 0:
            continue
        if count == 1 or depth >= max_depth:
            c = complex(0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1))
            res = _newton(f, c, cell, residual_tol)
            if res is not None and res[1] <= residual_tol:
                z, fz = res
                if not any(abs(z - r.lam) <= 1e-9 * max(1.0, abs(z)) for r in roots):
                    roots.append(Root(z, fz, 0))
                    continue
            if depth >= max_depth:
                raise ConvergenceError(f"could not isolate zeros in {cell}")
        for child in cell.quadrants():
            stack.append((child, _winding(ev, child.corners), depth + 1))

    verified = []
    for k, r in enumerate(roots):
        others = [abs(r.lam - o.lam) for j, o in enumerate(roots) if j != k]
        radius = min([1e-4 * max(1.0, abs(r.lam))] + [d / 3 for d in others])
        radius = min(radius, 0.5 * max(1e-12, _dist_to_edge(rect, r.lam))) if _dist_to_edge(rect, r.lam) > 0 else radius
        local = _winding(_Evaluator(f, 0.0), _circle(r.lam, radius))
        verified.append(Root(r.lam, r.residual, local))
    if sum(r.winding for r in verified) != total:
        raise ConvergenceError(
            f"winding number {total} but {len(verified)} zeros were refined"
        )
    verified.sort(key=lambda r: (r.lam.real, r.lam.imag))
    return verified


def _dist_to_edge(rect: Rect, z: complex) -> float:
    return min(z.real - rect.x0, rect.x1 - z.real, z.imag - rect.y0, rect.y1 - z.imag)


def find_roots_region(
    f: Callable[[complex], complex], rect: Rect, residual_tol: float = 1e-10, sleeve: float = SLEEVE
) -> list[Root]:
    """:func:`find_roots` over ``rect`` with the sleeve around ``[0, inf)`` removed."""
    out: list[Root] = []
    for piece in split_off_cut(rect, sleeve):
        out.extend(find_roots(f, piece, residual_tol))
    out.sort(key=lambda r: (r.lam.real, r.lam.imag))
    return out
