"""The reduced phase space of four vectors summing to zero, in (J12, phi12).

With the gauge of :func:`w6j.geometry.build_vectors` the 1-2-12 triangle has
apex ``(r1 cos phi, r1 sin phi, z1)`` and the 3-4-12 triangle apex
``(r3, 0, z3)``, which gives closed forms

    J23^2 = r1^2 + r3^2 + (z3 - z1)^2 - 2 r1 r3 cos phi
    J13^2 = r1^2 + r3^2 + (z1 + z3 - J12)^2 + 2 r1 r3 cos phi
    V     = J12 r1 r3 sin(phi) / 6

so ``J23`` rises and ``J13`` falls as ``phi`` runs from 0 to pi.  Areas
use the symplectic form ``dJ12 ^ dphi12`` with positive orientation and
count the sublevel set ``{observable < value}``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from .errors import DegenerateConfig, EmptyLevelSet, ValidationError
from .geometry import build_vectors, classical_j12_range, signed_volume

__all__ = [
    "KMPoint",
    "SphereEmbedding",
    "OBSERVABLES",
    "km_observables",
    "observable_value",
    "observable_range",
    "level_curve",
    "enclosed_area",
    "total_area",
    "caustic_curve",
    "sphere_embed",
    "sphere_unembed",
    "sphere_xyz",
]

OBSERVABLES = ("J12", "J23", "J13", "V")


class KMPoint(NamedTuple):
    J12: float
    phi12: float


class SphereEmbedding(NamedTuple):
    theta: float
    phi: float


def _quad4(quad4):
    return tuple(float(x) for x in quad4)


def _hinges(quad4, J12):
    J1, J2, J3, J4 = quad4
    if J12 <= 0:
        raise DegenerateConfig("J12 = 0 is a singular point of the reduced space")
    z1 = (J1 * J1 - J2 * J2 + J12 * J12) / (2 * J12)
    z3 = (J4 * J4 - J3 * J3 + J12 * J12) / (2 * J12)
    r1 = math.sqrt(max(J1 * J1 - z1 * z1, 0.0))
    r3 = math.sqrt(max(J4 * J4 - z3 * z3, 0.0))
    return z1, r1, z3, r3


def _j23_sq(h, J12, c):
    z1, r1, z3, r3 = h
    return r1 * r1 + r3 * r3 + (z3 - z1) ** 2 - 2 * r1 * r3 * c


def _j13_sq(h, J12, c):
    z1, r1, z3, r3 = h
    return r1 * r1 + r3 * r3 + (z1 + z3 - J12) ** 2 + 2 * r1 * r3 * c


def km_observables(quad4, p: KMPoint) -> tuple:
    """``(J23, J13, V)`` at a point, built from explicit vectors.

    At the pinch points (``J12`` at either end of its range) one triangle
    collapses onto the axis and every ``phi12`` gives the same values.
    """
    q = _quad4(quad4)
    lo, hi = classical_j12_range(*q)
    if not lo - 1e-12 <= p.J12 <= hi + 1e-12:
        raise ValidationError(f"J12 = {p.J12} outside [{lo}, {hi}]")
    J12 = min(max(p.J12, lo), hi)
    strict = lo < J12 < hi
    v = build_vectors(*q, J12, p.phi12, strict=strict)
    J23 = float(np.linalg.norm(v.J2 + v.J3))
    J13 = float(np.linalg.norm(v.J1 + v.J3))
    return J23, J13, signed_volume(v)


def observable_value(quad4, observable: str, p: KMPoint) -> float:
    q = _quad4(quad4)
    if observable == "J12":
        return p.J12
    h = _hinges(q, p.J12)
    c = math.cos(p.phi12)
    if observable == "J23":
        return math.sqrt(max(_j23_sq(h, p.J12, c), 0.0))
    if observable == "J13":
        return math.sqrt(max(_j13_sq(h, p.J12, c), 0.0))
    if observable == "V":
        return p.J12 * h[1] * h[3] * math.sin(p.phi12) / 6
    raise ValidationError(f"unknown observable {observable!r}")


def _extent(q, observable, J12):
    """(min, max) of the observable over the circle at fixed J12."""
    if observable == "J12":
        return J12, J12
    h = _hinges(q, J12)
    if observable == "V":
        vmax = J12 * h[1] * h[3] / 6
        return -vmax, vmax
    f = _j23_sq if observable == "J23" else _j13_sq
    a, b = f(h, J12, 1.0), f(h, J12, -1.0)
    a, b = math.sqrt(max(a, 0.0)), math.sqrt(max(b, 0.0))
    return min(a, b), max(a, b)


def observable_range(quad4, observable: str) -> tuple:
    """Global (min, max) of an observable on the sphere."""
    q = _quad4(quad4)
    lo, hi = classical_j12_range(*q)
    if observable == "J12":
        return lo, hi
    best_lo, best_hi = math.inf, -math.inf
    grid = np.linspace(lo, hi, 257)[1:-1] if lo > 0 else np.linspace(lo, hi, 257)[1:-1]
    for J in grid:
        a, b = _extent(q, observable, J)
        best_lo, best_hi = min(best_lo, a), max(best_hi, b)
    # polish both ends with a bounded scalar search
    eps = (hi - lo) * 1e-12
    r1 = minimize_scalar(lambda J: _extent(q, observable, J)[0], bounds=(lo + eps, hi - eps),
                         method="bounded", options={"xatol": 1e-13})
    r2 = minimize_scalar(lambda J: -_extent(q, observable, J)[1], bounds=(lo + eps, hi - eps),
                         method="bounded", options={"xatol": 1e-13})
    for J in (lo + eps, hi - eps):
        a, b = _extent(q, observable, J)
        best_lo, best_hi = min(best_lo, a), max(best_hi, b)
    return float(min(best_lo, r1.fun)), float(max(best_hi, -r2.fun))


def _phi_star(q, observable, J12, value):
    """phi in [0, pi] where the observable equals value at this J12, or None."""
    h = _hinges(q, J12)
    z1, r1, z3, r3 = h
    if observable == "V":
        vmax = J12 * r1 * r3 / 6
        if vmax <= 0 or abs(value) > vmax:
            return None
        return math.asin(min(abs(value) / vmax, 1.0))
    if r1 * r3 == 0:
        return None
    if observable == "J23":
        c = (r1 * r1 + r3 * r3 + (z3 - z1) ** 2 - value * value) / (2 * r1 * r3)
    else:
        c = (value * value - r1 * r1 - r3 * r3 - (z1 + z3 - J12) ** 2) / (2 * r1 * r3)
    if c > 1 or c < -1:
        return None
    return math.acos(c)


def level_curve(quad4, observable: str, value: float, n_points: int = 200) -> list:
    """Ordered points on the level set ``observable = value``.

    ``J12`` level sets are circles of constant ``J12``.  For the others the
    upper half (phi in [0, pi]) is traced with increasing ``J12`` and the
    lower half is its mirror image ``phi -> 2 pi - phi``, traversed back.
    """
    q = _quad4(quad4)
    lo, hi = classical_j12_range(*q)
    if observable not in OBSERVABLES:
        raise ValidationError(f"unknown observable {observable!r}")
    if observable == "J12":
        if not lo <= value <= hi:
            raise EmptyLevelSet(f"J12 = {value} outside [{lo}, {hi}]")
        return [KMPoint(value, 2 * math.pi * k / n_points) for k in range(n_points)]
    gmin, gmax = observable_range(q, observable)
    scale = max(q)
    if value > gmax + 1e-12 * scale or value < gmin - 1e-12 * scale:
        raise EmptyLevelSet(f"{observable} = {value} outside [{gmin}, {gmax}]")
    if observable == "V" and value == 0:
        js = _j12_grid(lo, hi, n_points // 2)
        return [KMPoint(J, 0.0) for J in js] + [KMPoint(J, math.pi) for J in reversed(js)]
    for target, end in ((gmax, "max"), (gmin, "min")):
        if abs(value - target) <= 1e-12 * scale:
            sign = 1 if end == "max" else -1
            r = minimize_scalar(lambda J: -sign * _extent(q, observable, J)[1 if end == "max" else 0],
                                bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
            J = float(r.x)
            phi = _extreme_phi(observable, end)
            return [KMPoint(J, phi)]
    js = _j12_grid(lo, hi, max(n_points // 2, 8) * 4)
    upper = []
    for J in js:
        if J <= 0:
            continue
        ph = _phi_star(q, observable, J, value)
        if ph is None:
            continue
        if observable == "V":
            ph = ph if value > 0 else 2 * math.pi - ph
        upper.append(KMPoint(J, ph))
    if not upper:
        raise EmptyLevelSet(f"no points with {observable} = {value}")
    if observable == "V":
        other = [KMPoint(p.J12, (math.pi - p.phi12) % (2 * math.pi)) for p in reversed(upper)]
        return upper + other
    return upper + [KMPoint(p.J12, 2 * math.pi - p.phi12) for p in reversed(upper)]


def _extreme_phi(observable, end):
    if observable == "J23":
        return math.pi if end == "max" else 0.0
    if observable == "J13":
        return 0.0 if end == "max" else math.pi
    return math.pi / 2 if end == "max" else 3 * math.pi / 2


def _j12_grid(lo, hi, n):
    t = np.linspace(0.0, math.pi, n)
    return list(lo + (hi - lo) * (1 - np.cos(t)) / 2)


def _measure_below(q, observable, J12, value) -> float:
    """Length in phi of ``{phi in [0, 2pi): observable < value}`` at fixed J12."""
    a, b = _extent(q, observable, J12)
    if value <= a:
        return 0.0
    if value >= b:
        return 2 * math.pi
    ph = _phi_star(q, observable, J12, value)
    if ph is None:
        return 0.0 if value <= a else 2 * math.pi
    if observable == "J23":
        return 2 * ph
    if observable == "J13":
        return 2 * (math.pi - ph)
    # V = vmax sin(phi)
    if value >= 0:
        return 2 * math.pi - (math.pi - 2 * ph)
    return math.pi - 2 * ph


def total_area(quad4) -> float:
    lo, hi = classical_j12_range(*_quad4(quad4))
    return 2 * math.pi * (hi - lo)


def enclosed_area(quad4, observable: str, value: float) -> float:
    """Symplectic area of ``{observable < value}``.

    For ``J12`` this is the cap around the minimum pole, so the n-th
    quantized orbit counted from ``J12_min`` encloses ``(n + 1/2) 2 pi``.
    The cap around the maximum pole is ``total_area - enclosed_area``.
    """
    q = _quad4(quad4)
    lo, hi = classical_j12_range(*q)
    if observable not in OBSERVABLES:
        raise ValidationError(f"unknown observable {observable!r}")
    if observable == "J12":
        return 2 * math.pi * (min(max(value, lo), hi) - lo)
    gmin, gmax = observable_range(q, observable)
    if value <= gmin:
        return 0.0
    if value >= gmax:
        return total_area(q)
    # the integrand has kinks where value touches the extent of a slice
    a0 = lo if lo > 0 else lo + (hi - lo) * 1e-15
    grid = np.linspace(a0, hi, 401)
    breaks = []
    for k in (0, 1):
        g = [_extent(q, observable, J)[k] - value for J in grid]
        for i in range(len(grid) - 1):
            if g[i] == 0:
                breaks.append(float(grid[i]))
            elif g[i] * g[i + 1] < 0:
                breaks.append(brentq(lambda J: _extent(q, observable, J)[k] - value,
                                     grid[i], grid[i + 1], xtol=1e-14))
    pts = sorted({b for b in breaks if a0 < b < hi})
    edges = [a0] + pts + [hi]
    total = 0.0
    for x0, x1 in zip(edges[:-1], edges[1:]):
        val, _ = quad(lambda J: _measure_below(q, observable, J, value), x0, x1,
                      limit=200, epsabs=1e-11, epsrel=1e-11)
        total += val
    return total


def caustic_curve(quad4, n_points: int = 200) -> list:
    """Closed polyline of flat tetrahedra, as (J12, J23) pairs."""
    q = _quad4(quad4)
    lo, hi = classical_j12_range(*q)
    js = [J for J in _j12_grid(lo, hi, max(n_points // 2, 2)) if J > 0]
    near = [(J, observable_value(q, "J23", KMPoint(J, 0.0))) for J in js]
    far = [(J, observable_value(q, "J23", KMPoint(J, math.pi))) for J in reversed(js)]
    return near + far


def sphere_embed(quad4, p: KMPoint) -> SphereEmbedding:
    lo, hi = classical_j12_range(*_quad4(quad4))
    D = hi - lo
    c = 2 * (p.J12 - lo) / D - 1
    return SphereEmbedding(math.acos(min(max(c, -1.0), 1.0)), p.phi12 % (2 * math.pi))


def sphere_unembed(quad4, e: SphereEmbedding) -> KMPoint:
    lo, hi = classical_j12_range(*_quad4(quad4))
    return KMPoint(lo + (hi - lo) / 2 * (1 + math.cos(e.theta)), e.phi)


def sphere_xyz(quad4, p: KMPoint) -> tuple:
    th, ph = sphere_embed(quad4, p)
    return (math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th))
