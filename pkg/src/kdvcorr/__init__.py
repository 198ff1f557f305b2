"""Exact n-point correlation functions of the KdV tau-function hierarchy.

The package computes psi-class intersection numbers, mixed psi-kappa numbers
and Weil-Petersson volume polynomials as exact rationals, through closed
matrix-trace formulas evaluated in truncated Laurent series arithmetic.
"""
from __future__ import annotations

from .rationals import (
    BACKEND,
    double_factorial,
    factorial,
    num_den,
    odd_double_factorial,
    rat,
    rat_str,
)
from .series import LaurentSeries
from .diffpoly import (
    DiffPoly,
    flow_derivative,
    mat2_mul,
    omega,
    resolvent,
    riccati_chi,
    theta_matrix,
    two_point_general,
)
from .partitions import (
    SPoly,
    bell_number,
    h_polynomials,
    l_entry,
    mult_factorial,
    multiplicities,
    partition_to_monomial,
    partitions_of,
    weight_cap,
)
from .npoint import TruncationInstability, npoint_window
from .wk import (
    CorrelatorTable,
    correlator,
    genus,
    n_point_table,
    normalization_convert,
    normalization_factor,
    one_point,
)
from .wp import (
    DeformedWave,
    WpVolume,
    deformed_wave,
    kappa_linear,
    mixed_correlator,
    mixed_genus,
    wave_component_series,
    wp_volume,
)
from .selftest import CheckResult, check_names, run_selftest

__all__ = [
    "BACKEND",
    "CheckResult",
    "CorrelatorTable",
    "DeformedWave",
    "DiffPoly",
    "LaurentSeries",
    "SPoly",
    "TruncationInstability",
    "WpVolume",
    "bell_number",
    "check_names",
    "correlator",
    "deformed_wave",
    "double_factorial",
    "factorial",
    "flow_derivative",
    "genus",
    "h_polynomials",
    "kappa_linear",
    "l_entry",
    "mat2_mul",
    "mixed_correlator",
    "mixed_genus",
    "mult_factorial",
    "multiplicities",
    "n_point_table",
    "normalization_convert",
    "normalization_factor",
    "npoint_window",
    "num_den",
    "odd_double_factorial",
    "omega",
    "one_point",
    "partition_to_monomial",
    "partitions_of",
    "rat",
    "rat_str",
    "resolvent",
    "riccati_chi",
    "run_selftest",
    "theta_matrix",
    "two_point_general",
    "wave_component_series",
    "weight_cap",
    "wp_volume",
]
