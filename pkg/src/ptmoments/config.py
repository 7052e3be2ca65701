"""Numerical tolerances shared by every module.

All bands live here so the acceptance tests can pin them in one place.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # state validation
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-9
    # moments
    imag_trace: float = 1e-10
    imag_root: float = 1e-7
    # region A membership and 2D classification
    region: float = 1e-9
    # cubic solver: |Delta_c| below band * scale is treated as zero
    cubic_band: float = 1e-12
    # s-range feasibility
    s_disc: float = 1e-12
    s_root: float = 1e-10
    s_grid: int = 4096
    s_bisect: float = 1e-12
    # p4 feasibility band around [F-, F+]
    p4_feasible: float = 1e-8
    # band around the dividing surface (CLI --eps / PTMOM_EPS)
    classify: float = 1e-9


DEFAULT = Tolerances()
