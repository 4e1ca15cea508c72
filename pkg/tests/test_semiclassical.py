import math
from fractions import Fraction

import numpy as np
import pytest

from w6j.errors import NotAllowed, UnknownOperator
from w6j.exact import HalfInt, to_float
from w6j.geometry import (
    build_vectors,
    classical_j12_range,
    dihedral_angles,
    j23_extrema,
    polygon_inequality,
    signed_volume,
)
from w6j.semiclassical import (
    QuantizedLengths,
    allowed_config,
    holonomy_action,
    ponzano_regge,
    pr_phase,
    quantize,
    relative_action_forms,
    solve_phi12,
    weyl_eigenvalue,
    wigner_amplitude,
)
from w6j.symbols import SixJArgs, six_j_racah

REG = math.acos(1 / 3)


def random_tetra(rng):
    while True:
        L = rng.uniform(0.5, 3.0, 4)
        if not polygon_inequality(*L):
            continue
        lo, hi = classical_j12_range(*L)
        J12 = rng.uniform(lo, hi)
        phi = rng.uniform(0.1, math.pi - 0.1)
        if rng.random() < 0.5:
            phi = 2 * math.pi - phi
        v = build_vectors(*L, J12, phi)
        if abs(signed_volume(v)) > 1e-3:
            return L, J12, v


def test_quantize():
    assert quantize(0) == 0.5
    assert quantize("3/2") == 2.0
    assert quantize(HalfInt(9)) == 5.0
    assert QuantizedLengths.of("9/2", 3, "11/2", 6, "9/2", 4).lengths()[:4] == (5, 3.5, 6, 6.5)


def test_regular_phase():
    v = build_vectors(1, 1, 1, 1, 1, REG)
    assert pr_phase(v) == pytest.approx(6 * (math.pi - REG), abs=1e-12)
    assert pr_phase(v) == pytest.approx(11.4638, abs=1e-4)


def test_phase_scales_linearly():
    a = build_vectors(1, 1.2, 0.9, 1.1, 1.3, 1.0)
    b = build_vectors(3, 3.6, 2.7, 3.3, 3.9, 1.0)
    assert pr_phase(b) == pytest.approx(3 * pr_phase(a), rel=1e-12)


def test_action_forms_agree():
    rng = np.random.default_rng(11)
    for _ in range(200):
        _, _, v = random_tetra(rng)
        s1, s2 = relative_action_forms(v)
        assert abs(s1 - s2) < 1e-10


def test_holonomy_action():
    rng = np.random.default_rng(12)
    for _ in range(200):
        _, _, v = random_tetra(rng)
        s1, _ = relative_action_forms(v)
        assert holonomy_action(v) == pytest.approx(s1, abs=1e-9)


@pytest.mark.parametrize("which", ["J12", "J23"])
def test_phase_derivatives(which):
    # d Psi / d J = pi - phi, holding the other five lengths fixed
    rng = np.random.default_rng(13 if which == "J12" else 14)
    h = 1e-5
    checked = 0
    while checked < 30:
        L, J12, v = random_tetra(rng)
        J23 = v.lengths().J23
        phis = dihedral_angles(v)

        def psi(dJ12, dJ23):
            return pr_phase(allowed_config(*L, J12 + dJ12, J23 + dJ23))

        try:
            if which == "J12":
                d = (psi(h, 0) - psi(-h, 0)) / (2 * h)
                want = math.pi - phis.phi12
            else:
                d = (psi(0, h) - psi(0, -h)) / (2 * h)
                want = math.pi - phis.phi23
        except NotAllowed:
            continue
        assert d == pytest.approx(want, abs=1e-4)
        checked += 1


def test_wigner_amplitude():
    v = build_vectors(1, 1, 1, 1, 1, REG)
    assert abs(wigner_amplitude(v)) == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    assert wigner_amplitude(v.time_reversed()) == pytest.approx(-wigner_amplitude(v), rel=1e-12)


def test_solve_phi12_round_trip():
    v = build_vectors(1, 1.2, 0.9, 1.1, 1.3, 1.1)
    phi = solve_phi12(1, 1.2, 0.9, 1.1, 1.3, v.lengths().J23)
    assert phi == pytest.approx(1.1, abs=1e-12)


def test_ponzano_regge_finite():
    r = ponzano_regge(QuantizedLengths.of(1, 1, 1, 1, 1, 1))
    assert math.isfinite(r.value) and r.region == "A" and not r.unreliable
    assert r.amplitude == pytest.approx(1 / math.sqrt(12 * math.pi * abs(r.volume)))


def test_ponzano_regge_tracks_exact():
    # large spins: the asymptotic value is within a few percent of the peak scale
    j = 20
    lo, hi = j23_extrema(*(quantize(j),) * 5)
    for t in range(int(2 * (lo + 0.25 * (hi - lo))), int(2 * (hi - 0.25 * (hi - lo)))):
        if t % 2:
            continue
        j23 = Fraction(t, 2)
        exact = to_float(six_j_racah(SixJArgs.of(j, j, j, j, j, j23)))
        pr = ponzano_regge(QuantizedLengths.of(j, j, j, j, j, j23)).value
        assert abs(pr - exact) < 0.1 * ponzano_regge(QuantizedLengths.of(j, j, j, j, j, j23)).amplitude


def test_not_allowed():
    with pytest.raises(NotAllowed):
        ponzano_regge(QuantizedLengths.of(1, 1, 1, 1, 1, 3))
    with pytest.raises(NotAllowed):
        allowed_config(5, 3.5, 6, 6.5, 2, 3.0)


def test_weyl():
    assert weyl_eigenvalue("I_r", "3/2") == Fraction(3, 2)
    assert weyl_eigenvalue("Jsq_r", 1) == Fraction(15, 8)
    assert weyl_eigenvalue("Jsq_12", "1/2") == Fraction(1, 4)
    assert weyl_eigenvalue("Jsq_23", 0) == Fraction(-1, 2)
    with pytest.raises(UnknownOperator):
        weyl_eigenvalue("Jz", 1)


def test_time_reversal_keeps_phase():
    # dihedral angles are unsigned, so only the volume changes sign
    for js in [(1, 1, 1, 1, 1, 1), ("9/2", 3, "11/2", 6, 5, 5), (2, 2, 2, 2, 2, 2)]:
        v = allowed_config(*QuantizedLengths.of(*js).lengths())
        assert pr_phase(v.time_reversed()) == pytest.approx(pr_phase(v), abs=1e-12)
        assert signed_volume(v.time_reversed()) == pytest.approx(-signed_volume(v), rel=1e-12)
