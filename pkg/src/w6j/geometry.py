"""Tetrahedra built from four angular-momentum vectors that sum to zero.

The vertices are ``P0 = 0``, ``P1 = J1``, ``P2 = J1 + J2`` and
``P3 = J1 + J2 + J3``, so the six edges are ``J1 = P0P1``, ``J2 = P1P2``,
``J3 = P2P3``, ``J4 = P3P0``, ``J12 = P0P2`` and ``J23 = P1P3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DegenerateConfig, EmptyRange

__all__ = [
    "LengthSet",
    "VectorConfig",
    "DihedralSet",
    "CycleReport",
    "polygon_inequality",
    "classical_j12_range",
    "classical_j23_range",
    "cayley_menger",
    "j23_extrema",
    "build_vectors",
    "signed_volume",
    "dihedral_angles",
    "classify_region",
    "caustic_tolerance",
    "rotation_matrix",
    "rodrigues_hamilton",
    "spherical_angles",
    "su2",
    "rotation_cycle",
    "AB_MANIFOLD_VOLUME",
    "INTERSECTION_MANIFOLD_VOLUME",
]

# Lagrangian-manifold volumes, documented constants only
AB_MANIFOLD_VOLUME = 2**12 * math.pi**7
INTERSECTION_MANIFOLD_VOLUME = 2**11 * math.pi**6


class LengthSet(NamedTuple):
    J1: float
    J2: float
    J3: float
    J4: float
    J12: float
    J23: float


@dataclass(frozen=True)
class VectorConfig:
    J1: np.ndarray
    J2: np.ndarray
    J3: np.ndarray
    J4: np.ndarray

    def vectors(self) -> tuple:
        return (self.J1, self.J2, self.J3, self.J4)

    def lengths(self) -> LengthSet:
        n = np.linalg.norm
        return LengthSet(n(self.J1), n(self.J2), n(self.J3), n(self.J4),
                         n(self.J1 + self.J2), n(self.J2 + self.J3))

    def vertices(self) -> np.ndarray:
        p1 = self.J1
        p2 = p1 + self.J2
        p3 = p2 + self.J3
        return np.array([np.zeros(3), p1, p2, p3])

    def time_reversed(self) -> "VectorConfig":
        return VectorConfig(-self.J1, -self.J2, -self.J3, -self.J4)


class DihedralSet(NamedTuple):
    phi1: float
    phi2: float
    phi3: float
    phi4: float
    phi12: float
    phi23: float


def polygon_inequality(J1, J2, J3, J4) -> bool:
    Js = (J1, J2, J3, J4)
    return max(Js) <= sum(Js) / 2


def _range(a, b, c, d):
    if not polygon_inequality(a, b, c, d):
        raise EmptyRange(f"polygon inequality fails for {(a, b, c, d)}")
    return max(abs(a - b), abs(c - d)), min(a + b, c + d)


def classical_j12_range(J1, J2, J3, J4) -> tuple:
    """Interval allowed for ``J12`` by the triangles (1,2,12) and (3,4,12)."""
    return _range(J1, J2, J3, J4)


def classical_j23_range(J1, J2, J3, J4) -> tuple:
    return _range(J2, J3, J1, J4)


def _cm_matrix(J1, J2, J3, J4, J12, x):
    return [
        [0, 1, 1, 1, 1],
        [1, 0, J1 * J1, J12 * J12, J4 * J4],
        [1, J1 * J1, 0, J2 * J2, x * x],
        [1, J12 * J12, J2 * J2, 0, J3 * J3],
        [1, J4 * J4, x * x, J3 * J3, 0],
    ]


def _det_exact(m) -> Fraction:
    # fraction-valued Gaussian elimination
    a = [[Fraction(v) for v in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def cayley_menger(J1, J2, J3, J4, J12, x) -> float:
    """Bordered distance determinant; equals ``288 V^2`` with ``x = J23``.

    Rows and columns follow the vertex order P0, P1, P2, P3: the entries are
    ``J1^2`` (P0P1), ``J12^2`` (P0P2), ``J4^2`` (P0P3), ``J2^2`` (P1P2),
    ``x^2`` (P1P3) and ``J3^2`` (P2P3).  Exact when all inputs are Fractions
    or ints.
    """
    vals = (J1, J2, J3, J4, J12, x)
    if all(isinstance(v, (int, Fraction)) for v in vals):
        return _det_exact(_cm_matrix(*vals))
    return float(np.linalg.det(np.array(_cm_matrix(*map(float, vals)), dtype=float)))


def _cm_quadratic(J1, J2, J3, J4, J12):
    """Coefficients (a, b, c) of ``det = a y^2 + b y + c`` with ``y = x^2``."""
    sq = [Fraction(v) ** 2 for v in (J1, J2, J3, J4, J12)]
    # x only enters through x^2, so evaluate at three rational x^2 values
    def at(y):
        L1, L2, L3, L4, L12 = sq
        m = [
            [0, 1, 1, 1, 1],
            [1, 0, L1, L12, L4],
            [1, L1, 0, L2, y],
            [1, L12, L2, 0, L3],
            [1, L4, y, L3, 0],
        ]
        return _det_exact(m)

    d0, d1, d2 = at(Fraction(0)), at(Fraction(1)), at(Fraction(2))
    a = (d2 - 2 * d1 + d0) / 2
    b = d1 - d0 - a
    return a, b, d0


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def j23_extrema(J1, J2, J3, J4, J12) -> tuple:
    """The two positive roots ``x_min <= x_max`` of the determinant in ``x``."""
    if _tri_area2(J1, J2, J12) <= 0 or _tri_area2(J3, J4, J12) <= 0:
        raise DegenerateConfig("a triangle bounding the 12 edge has zero area")
    a, b, c = _cm_quadratic(*(_frac(v) for v in (J1, J2, J3, J4, J12)))
    a, b, c = float(a), float(b), float(c)
    disc = max(b * b - 4 * a * c, 0.0)
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    r1, r2 = q / a, (c / q if q else 0.0)
    y1, y2 = sorted((r1, r2))
    return abs(math.sqrt(max(y1, 0.0))), math.sqrt(max(y2, 0.0))


def _tri_area2(a, b, c) -> float:
    # 16 * area^2 via Heron
    a, b, c = float(a), float(b), float(c)
    return (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)


def _hinge(a, b, c):
    """Apex of a triangle on base (0,0,0)-(0,0,c) with sides a (to origin) and b."""
    z = (a * a - b * b + c * c) / (2 * c)
    rho = math.sqrt(max(a * a - z * z, 0.0))
    return z, rho


def build_vectors(J1, J2, J3, J4, J12, phi12, strict: bool = True) -> VectorConfig:
    """Four vectors with the given lengths and dihedral angle ``phi12``.

    ``J12`` points along +z and ``P3`` lies in the xz-plane with x > 0.
    The 1-2-12 triangle is hinged on the z axis: ``phi12 = 0`` puts ``P1``
    on the same side as ``P3`` (smallest ``J23``) and ``phi12 = pi`` on the
    opposite side (largest ``J23``).  With ``strict=False`` a zero-area
    triangle is accepted (it just lies on the axis).
    """
    J1, J2, J3, J4, J12 = map(float, (J1, J2, J3, J4, J12))
    if J12 <= 0:
        raise DegenerateConfig("J12 must be positive")
    t1, t2 = _tri_area2(J1, J2, J12), _tri_area2(J4, J3, J12)
    tol = -1e-12 * max(J1, J2, J3, J4, J12) ** 4
    if t1 < tol or t2 < tol or (strict and (t1 <= 0 or t2 <= 0)):
        raise DegenerateConfig("triangles (1,2,12) and (3,4,12) need positive area")
    z1, r1 = _hinge(J1, J2, J12)
    z3, r3 = _hinge(J4, J3, J12)
    p1 = np.array([r1 * math.cos(phi12), r1 * math.sin(phi12), z1])
    p2 = np.array([0.0, 0.0, J12])
    p3 = np.array([r3, 0.0, z3])
    return VectorConfig(p1, p2 - p1, p3 - p2, -p3)


def signed_volume(v: VectorConfig) -> float:
    return float(np.dot(v.J1, np.cross(v.J2, v.J3))) / 6.0


# faces as vertex triples; edge -> (edge vertices, the two opposite vertices)
_EDGES = {
    "phi1": ((0, 1), (2, 3)),
    "phi2": ((1, 2), (0, 3)),
    "phi3": ((2, 3), (0, 1)),
    "phi4": ((3, 0), (1, 2)),
    "phi12": ((0, 2), (1, 3)),
    "phi23": ((1, 3), (0, 2)),
}


def _interior_dihedral(P, e, opp):
    a, b = P[e[0]], P[e[1]]
    axis = b - a
    n = np.linalg.norm(axis)
    if n == 0:
        raise DegenerateConfig("zero-length edge")
    axis = axis / n
    u = P[opp[0]] - a
    w = P[opp[1]] - a
    u = u - np.dot(u, axis) * axis
    w = w - np.dot(w, axis) * axis
    nu, nw = np.linalg.norm(u), np.linalg.norm(w)
    scale = max(np.linalg.norm(P[i] - P[j]) for i in range(4) for j in range(4))
    if nu <= 1e-14 * scale or nw <= 1e-14 * scale:
        raise DegenerateConfig("zero-area face")
    return math.atan2(np.linalg.norm(np.cross(u, w)), np.dot(u, w))


def dihedral_angles(v: VectorConfig) -> DihedralSet:
    """Interior dihedral angle at each of the six edges, each in [0, pi]."""
    P = v.vertices()
    return DihedralSet(**{k: _interior_dihedral(P, e, o) for k, (e, o) in _EDGES.items()})


def caustic_tolerance(*lengths) -> float:
    return 1e-9 * max(map(float, lengths)) ** 8


def classify_region(J1, J2, J3, J4, J12, J23) -> str:
    """One of U (no tetrahedron), B (square edge), A, F or C.

    A point is allowed (A) when the Cayley-Menger determinant is positive,
    forbidden (F) when negative and on the caustic (C) when it vanishes to
    within ``1e-9 * scale^8``.
    """
    try:
        lo12, hi12 = classical_j12_range(J1, J2, J3, J4)
        lo23, hi23 = classical_j23_range(J1, J2, J3, J4)
    except EmptyRange:
        return "U"
    if not (lo12 <= J12 <= hi12 and lo23 <= J23 <= hi23):
        return "U"
    if J12 in (lo12, hi12) or J23 in (lo23, hi23):
        return "B"
    d = cayley_menger(J1, J2, J3, J4, J12, J23)
    tol = caustic_tolerance(J1, J2, J3, J4, J12, J23)
    if d >= tol:
        return "A"
    if d <= -tol:
        return "F"
    return "C"


# --------------------------------------------------------------------------
# rotations

def rotation_matrix(axis, angle) -> np.ndarray:
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    K = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + math.sin(angle) * K + (1 - math.cos(angle)) * (K @ K)


_SIGMA = (np.array([[0, 1], [1, 0]], dtype=complex),
          np.array([[0, -1j], [1j, 0]], dtype=complex),
          np.array([[1, 0], [0, -1]], dtype=complex))


def su2(axis, angle) -> np.ndarray:
    """``cos(angle/2) I - i sin(angle/2) a.sigma``."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    s = sum(a[k] * _SIGMA[k] for k in range(3))
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * s


def rodrigues_hamilton(a1, a2, a3, phi1, phi2, phi3) -> np.ndarray:
    """``R(a3, 2 phi3) R(a2, 2 phi2) R(a1, 2 phi1)``.

    For vertices of a spherical triangle with the angles returned by
    :func:`spherical_angles` this is the identity.
    """
    return (rotation_matrix(a3, 2 * phi3) @ rotation_matrix(a2, 2 * phi2)
            @ rotation_matrix(a1, 2 * phi1))


def spherical_angles(a1, a2, a3) -> tuple:
    """Angles at the vertices of the triangle lying to the right of a1 -> a2 -> a3.

    For a clockwise-ordered triple (negative triple product) these are the
    ordinary interior angles; otherwise the complementary region is meant
    and each angle is ``2 pi`` minus the interior one.
    """
    a = [np.asarray(x, dtype=float) / np.linalg.norm(x) for x in (a1, a2, a3)]

    def corner(p, q, r):
        u = q - np.dot(q, p) * p
        w = r - np.dot(r, p) * p
        return math.atan2(np.linalg.norm(np.cross(u, w)), np.dot(u, w))

    ang = [corner(a[0], a[1], a[2]), corner(a[1], a[2], a[0]), corner(a[2], a[0], a[1])]
    if np.dot(a[0], np.cross(a[1], a[2])) > 0:
        ang = [2 * math.pi - x for x in ang]
    return tuple(ang)


@dataclass(frozen=True)
class CycleReport:
    composite_error: float  # max deviation of R23 R12 {J} from R(j4, 2 phi4) {J}
    lift_signs: tuple  # SU(2) loop products for spinors 1..4, each +-1
    holonomy_angles: tuple  # rotation angles about j1..j4, in (-2pi, 2pi]
    expected_angles: tuple  # (2phi1 - 2pi, 2phi2, 2phi3 - 2pi, 2phi4)
    branch: int  # +1 when the axes are the unit vectors (V < 0), else -1


def _unit(v):
    return v / np.linalg.norm(v)


def _su2_angle(U, axis) -> float:
    c = U[0, 0].real + U[1, 1].real
    # U = c/2 I - i s a.sigma, so tr(U a.sigma) = -2 i s
    s = sum(axis[k] * _SIGMA[k] for k in range(3))
    sn = -(np.trace(U @ s) / 2j).real
    return 2 * math.atan2(sn, c / 2)


def rotation_cycle(v: VectorConfig) -> CycleReport:
    """Check the rotation/holonomy cycle on a nondegenerate tetrahedron.

    ``R12`` turns vectors 1 and 2 about the 12 direction by ``2 phi12``,
    which reflects them through the plane of 3, 4 and 12.  ``R23`` then turns
    the new 2 and 3 about the (new) 23 direction by ``2 phi23``.  The result
    equals ``R(j4, 2 phi4)`` applied to all four vectors.  The axes are the
    unit vectors themselves on the negative-volume branch and their
    negatives when the volume is positive.
    """
    V = signed_volume(v)
    L = max(np.linalg.norm(x) for x in v.vectors())
    if abs(V) < 1e-12 * L**3:
        raise DegenerateConfig("flat tetrahedron")
    ph = dihedral_angles(v)
    br = 1 if V < 0 else -1
    J1, J2, J3, J4 = v.vectors()
    j1, j2, j3, j4 = (_unit(x) for x in (J1, J2, J3, J4))
    j12 = br * _unit(J1 + J2)
    j1, j2, j3, j4 = br * j1, br * j2, br * j3, br * j4

    R12 = rotation_matrix(j12, 2 * ph.phi12)
    J1p, J2p = R12 @ J1, R12 @ J2
    j23p = br * _unit(J2p + J3)
    R23 = rotation_matrix(j23p, 2 * ph.phi23)
    J2pp, J3p = R23 @ J2p, R23 @ J3
    R4 = rotation_matrix(j4, 2 * ph.phi4)
    moved = (J1p, J2pp, J3p, J4)
    target = tuple(R4 @ x for x in (J1, J2, J3, J4))
    err = max(float(np.max(np.abs(a - b))) for a, b in zip(moved, target)) / L

    u12 = su2(j12, 2 * ph.phi12)
    u23 = su2(j23p, 2 * ph.phi23)
    u4inv = su2(-j4, 2 * ph.phi4)
    loops = (
        u4inv @ u12,
        u4inv @ u23 @ u12,
        u4inv @ u23,
        u4inv,
    )
    axes = (j1, j2, j3, j4)
    # closing each loop with a rotation about j_r by the dihedral angle
    closers = (2 * ph.phi1, 2 * ph.phi2, 2 * ph.phi3, 2 * ph.phi4)
    signs = []
    angles = []
    for U, a, c in zip(loops, axes, closers):
        P = su2(a, c) @ U
        signs.append(int(round((P[0, 0] + P[1, 1]).real / 2)))
        angles.append(_su2_angle(np.linalg.inv(U), a))
    expected = (2 * ph.phi1 - 2 * math.pi, 2 * ph.phi2, 2 * ph.phi3 - 2 * math.pi, 2 * ph.phi4)
    return CycleReport(err, tuple(signs), tuple(angles), expected, br)
