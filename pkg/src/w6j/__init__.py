"""Exact Wigner symbols, spin networks and 6j semiclassics."""

from .exact import ExactRadical, HalfInt, as_half, radical_add, radical_mul, to_float
from .symbols import (
    JQuad,
    SixJArgs,
    dim_zs,
    j12_bounds,
    j23_bounds,
    scalar_product_BA,
    six_j_msum,
    six_j_racah,
    three_j_symbol,
    time_reversal_phase,
    two_j_symbol,
)

__version__ = "0.1.0"
