"""Ponzano-Regge asymptotics, relative action and Weyl-symbol eigenvalues."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import DegenerateConfig, NotAllowed, UnknownOperator
from .exact import HalfInt, as_half
from .geometry import (
    VectorConfig,
    build_vectors,
    classify_region,
    dihedral_angles,
    rotation_cycle,
    signed_volume,
)

__all__ = [
    "QuantizedLengths",
    "PRResult",
    "quantize",
    "pr_phase",
    "relative_action",
    "relative_action_forms",
    "holonomy_action",
    "wigner_amplitude",
    "solve_phi12",
    "allowed_config",
    "ponzano_regge",
    "weyl_eigenvalue",
    "WEYL_OPERATORS",
]


class QuantizedLengths(NamedTuple):
    j1: HalfInt
    j2: HalfInt
    j3: HalfInt
    j4: HalfInt
    j12: HalfInt
    j23: HalfInt

    @classmethod
    def of(cls, *js) -> "QuantizedLengths":
        return cls(*(as_half(j) for j in js))

    def lengths(self) -> tuple:
        return tuple(quantize(j) for j in self)


@dataclass(frozen=True)
class PRResult:
    volume: float
    psi: float
    amplitude: float
    value: float
    region: str
    unreliable: bool = False


def quantize(j) -> float:
    """Classical length ``J = j + 1/2``."""
    return float(as_half(j).value) + 0.5


def _edge_lengths(v: VectorConfig):
    L = v.lengths()
    return (L.J1, L.J2, L.J3, L.J4, L.J12, L.J23)


def pr_phase(v: VectorConfig) -> float:
    """``sum_r J_r (pi - phi_r)`` over the six edges."""
    phis = dihedral_angles(v)
    return float(sum(J * (math.pi - p) for J, p in zip(_edge_lengths(v), phis)))


def relative_action_forms(v: VectorConfig) -> tuple:
    """Both expressions of the action: ``2 sum J phi - 2 pi (J1 + J3)``
    and ``-2 Psi + 2 pi (J2 + J4 + J12 + J23)``."""
    J1, J2, J3, J4, J12, J23 = _edge_lengths(v)
    phis = dihedral_angles(v)
    s1 = 2 * sum(J * p for J, p in zip((J1, J2, J3, J4, J12, J23), phis)) - 2 * math.pi * (J1 + J3)
    s2 = -2 * pr_phase(v) + 2 * math.pi * (J2 + J4 + J12 + J23)
    return s1, s2


def relative_action(v: VectorConfig) -> float:
    return relative_action_forms(v)[0]


def holonomy_action(v: VectorConfig) -> float:
    """Action assembled from the spinor holonomy angles of the rotation cycle."""
    rep = rotation_cycle(v)
    J1, J2, J3, J4, J12, J23 = _edge_lengths(v)
    phis = dihedral_angles(v)
    s = sum(J * a for J, a in zip((J1, J2, J3, J4), rep.holonomy_angles))
    return s + 2 * J12 * phis.phi12 + 2 * J23 * phis.phi23


def wigner_amplitude(v: VectorConfig) -> float:
    """Poisson bracket of ``|J2+J3|`` with ``|J1+J2|``: ``6V / (J12 J23)``."""
    L = v.lengths()
    return 6 * signed_volume(v) / (L.J12 * L.J23)


def solve_phi12(J1, J2, J3, J4, J12, J23, tol: float = 1e-15) -> float:
    """``phi12`` in [0, pi] at which ``|J2 + J3| = J23``.

    ``|J2 + J3|`` grows monotonically from its minimum at 0 to its maximum
    at pi, so plain bisection suffices.
    """
    def f(phi):
        v = build_vectors(J1, J2, J3, J4, J12, phi)
        return float((v.J2 + v.J3) @ (v.J2 + v.J3)) - J23 * J23

    lo, hi = 0.0, math.pi
    flo, fhi = f(lo), f(hi)
    if flo > 0 or fhi < 0:
        raise NotAllowed(f"J23 = {J23} is outside the reachable range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def allowed_config(J1, J2, J3, J4, J12, J23) -> VectorConfig:
    region = classify_region(J1, J2, J3, J4, J12, J23)
    if region != "A":
        raise NotAllowed(f"point is in region {region}, not classically allowed")
    try:
        return build_vectors(J1, J2, J3, J4, J12, solve_phi12(J1, J2, J3, J4, J12, J23))
    except DegenerateConfig as exc:
        raise NotAllowed(str(exc)) from None


def ponzano_regge(q: QuantizedLengths) -> PRResult:
    """``cos(Psi + pi/4) / sqrt(12 pi |V|)`` at lengths ``J = j + 1/2``."""
    q = q if isinstance(q, QuantizedLengths) else QuantizedLengths.of(*q)
    Ls = q.lengths()
    v = allowed_config(*Ls)
    V = signed_volume(v)
    psi = pr_phase(v)
    amp = 1.0 / math.sqrt(12 * math.pi * abs(V))
    unreliable = abs(V) < 1e-6 * max(Ls) ** 3
    return PRResult(float(V), float(psi), amp, float(amp * math.cos(psi + math.pi / 4)), "A", bool(unreliable))


WEYL_OPERATORS = ("I_r", "Jsq_r", "Jsq_12", "Jsq_23")


def weyl_eigenvalue(op_name: str, j) -> Fraction:
    """Weyl symbol evaluated on the quantized orbit, as an exact rational.

    ``I_r`` gives ``j``; ``Jsq_r`` gives ``(j+1/2)^2 - 3/8 = j(j+1) - 1/8``;
    ``Jsq_12`` and ``Jsq_23`` give ``(j+1/2)^2 - 3/4 = j(j+1) - 1/2``.
    """
    jv = as_half(j).value
    J = jv + Fraction(1, 2)
    if op_name == "I_r":
        return J - Fraction(1, 2)
    if op_name == "Jsq_r":
        return J * J - Fraction(3, 8)
    if op_name in ("Jsq_12", "Jsq_23"):
        return J * J - Fraction(3, 4)
    raise UnknownOperator(op_name)
