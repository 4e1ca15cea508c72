"""Fast consistency checks behind ``w6j selftest``."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .exact import HalfInt
from .geometry import build_vectors, cayley_menger, rotation_cycle, signed_volume
from .kmsphere import enclosed_area, total_area
from .network import evaluate_closed, tetrahedral_network, theta_network
from .semiclassical import weyl_eigenvalue
from .symbols import JQuad, SixJArgs, dim_zs, dim_zs_symmetric, six_j_msum, six_j_racah


def _oracle(max_twice=2):
    spins = [HalfInt(t) for t in range(max_twice + 1)]
    for a in itertools.product(spins, repeat=6):
        args = SixJArgs(*a)
        if six_j_racah(args) != six_j_msum(args):
            return False, f"mismatch at {args}"
    return True, ""


def _networks():
    for a in itertools.product([HalfInt(t) for t in range(3)], repeat=6):
        args = SixJArgs(*a)
        if evaluate_closed(tetrahedral_network(args)) != six_j_racah(args):
            return False, f"tetrahedral network differs at {args}"
    if evaluate_closed(theta_network(1, 1, 1)).coef != 1:
        return False, "theta graph is not 1"
    return True, ""


def _dimension():
    q = JQuad.of("9/2", 3, "11/2", 6)
    d = dim_zs(q)
    return d == 7 and dim_zs_symmetric(q) == 7, f"D = {d}"


def _cayley():
    v = build_vectors(1, 1, 1, 1, 1, math.acos(1 / 3))
    lhs = cayley_menger(1, 1, 1, 1, 1, 1)
    rhs = 288 * signed_volume(v) ** 2
    return abs(lhs - rhs) < 1e-9, f"{lhs} vs {rhs}"


def _cycle():
    rep = rotation_cycle(build_vectors(1, 1.2, 0.9, 1.1, 1.3, 2.0))
    return rep.lift_signs == (-1, 1, -1, 1) and rep.composite_error < 1e-10, str(rep.lift_signs)


def _area():
    quad = (5, 3.5, 6, 6.5)
    a = total_area(quad) / (2 * math.pi)
    b = enclosed_area(quad, "J23", 3.0) / (2 * math.pi)
    return abs(a - 7) < 1e-9 and abs(b - 0.5) < 1e-6, f"total {a}, first J23 orbit {b}"


def _weyl():
    ok = weyl_eigenvalue("I_r", 2) == 2 and weyl_eigenvalue("Jsq_r", 2) == Fraction(47, 8)
    return ok, ""


CHECKS = [
    ("racah equals m-sum (j <= 1)", _oracle),
    ("tetrahedral network equals 6j (j <= 1)", _networks),
    ("dimension of the 9/2 3 11/2 6 quad", _dimension),
    ("cayley-menger equals 288 V^2", _cayley),
    ("rotation cycle lift signs", _cycle),
    ("sphere area and first J23 orbit", _area),
    ("weyl eigenvalues", _weyl),
]


def run_checks():
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # report, never crash the selftest
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
