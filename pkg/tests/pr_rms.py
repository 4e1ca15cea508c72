"""RMS relative error of the Ponzano-Regge value on the equilateral family.

For {j j j; j j j23} the quantized j23 are taken from the middle half of the
classical interval [J23_min, J23_max] at J12 = j + 1/2, away from both
caustic points where the asymptotic form breaks down.
"""

import math

from w6j.exact import to_float
from w6j.geometry import j23_extrema
from w6j.semiclassical import QuantizedLengths, ponzano_regge
from w6j.symbols import SixJArgs, six_j_racah


def mid_region_errors(j: int) -> list:
    L = j + 0.5
    lo, hi = j23_extrema(L, L, L, L, L)
    a, b = lo + (hi - lo) / 4, hi - (hi - lo) / 4
    out = []
    for k in range(0, 2 * j + 1):
        if not a <= k + 0.5 <= b:
            continue
        exact = to_float(six_j_racah(SixJArgs.of(j, j, j, j, j, k)))
        pr = ponzano_regge(QuantizedLengths.of(j, j, j, j, j, k)).value
        out.append(abs(pr - exact) / abs(exact))
    return out


def pr_rms(j: int) -> float:
    errs = mid_region_errors(j)
    return math.sqrt(sum(e * e for e in errs) / len(errs))
