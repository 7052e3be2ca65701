"""Tight bounds on p4 given (p2, p3), the dividing surface and the
three-moment entanglement test.

Writing the determinant of rho^Gamma as a function of ``s`` (the sum of the
three largest eigenvalues) gives ``det = -P(s)`` with the quartic

    P(s) = s^4 - 3 s^3 + (7 - p2)/2 s^2 + (3 p2 + 2 p3 - 11)/6 s + (1 - p3)/3

and ``p4 = F(p2, p3) - 4 det``.  Extremes of ``P`` over ``[s_min, s_max]``
sit at the interval ends or at the stationary points of ``P``, so a
four-element candidate set gives both bounds on ``p4``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DomainError, InternalConsistencyError
from .region2d import f_bounds, in_region_A
from .srange import SRange, s_range_many



class Class3D(str, enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class StationaryRoots:
    """Zeros of dP/ds, descending.  ``theta`` is None only at the triple root."""

    r1: float
    r2: float
    r3: float
    delta: float
    theta: Optional[float] = None

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r1, self.r2, self.r3)


@dataclass(frozen=True)
class BoundsResult:
    """Determinant extremes ``m <= M`` and the matching p4 bounds.

    ``s_at_min`` / ``s_at_max`` are the values of ``s`` where the
    determinant reaches ``m`` / ``M`` (so ``F_plus`` / ``F_minus``)."""

    m: float
    M: float
    F_minus: float
    F_mid: float
    F_plus: float
    s_at_min: float
    s_at_max: float
    srange: SRange = field(repr=False)

    def to_json(self) -> dict:
        return {
            "m": self.m, "M": self.M,
            "F_minus": self.F_minus, "F_mid": self.F_mid, "F_plus": self.F_plus,
            "s_at_min": self.s_at_min, "s_at_max": self.s_at_max,
            "s_min": self.srange.s_min, "s_max": self.srange.s_max,
        }


def P_value(s, pair):
    """The quartic objective; accepts arrays for ``s`` and the pair."""
    p2, p3 = pair
    return (((s - 3.0) * s + (7.0 - p2) / 2.0) * s + (3.0 * p2 + 2.0 * p3 - 11.0) / 6.0) * s + (1.0 - p3) / 3.0


def dP_value(s, pair):
    p2, p3 = pair
    return ((4.0 * s - 9.0) * s + (7.0 - p2)) * s + (3.0 * p2 + 2.0 * p3 - 11.0) / 6.0


def dividing_surface(pair) -> float:
    """``F(p2, p3) = (3 p2^2 - 6 p2 + 8 p3 + 1) / 6``: the locus det = 0."""
    p2, p3 = pair
    return (3.0 * p2 * p2 - 6.0 * p2 + 8.0 * p3 + 1.0) / 6.0


def envelope(pair) -> tuple[float, float]:
    """``(F - 1/64, F + 1/4)``, from the global determinant range."""
    f = dividing_surface(pair)
    return f - 1.0 / 64.0, f + 0.25


def _require_A(pair, tol: Tolerances = DEFAULT) -> tuple[float, float]:
    if not in_region_A(pair, tol.region):
        raise DomainError(f"pair ({pair[0]!r}, {pair[1]!r}) is outside region A")
    return min(1.0, max(0.25, float(pair[0]))), float(pair[1])


def delta_and_pq(pair, tol: Tolerances = DEFAULT) -> tuple[float, float, float]:
    """Discriminant of dP/ds in depressed form, with ``p`` and ``q``.

    The two expressions ``q^2/4 + p^3/27`` and ``(p3 - f+)(p3 - f-)/576``
    are both evaluated and must agree."""
    p2, p3 = _require_A(pair, tol)
    p = (1.0 - 4.0 * p2) / 16.0
    q = (1.0 - 6.0 * p2 + 8.0 * p3) / 96.0
    direct = q * q / 4.0 + p * p * p / 27.0
    lo, hi = f_bounds(p2)
    factored = (p3 - hi) * (p3 - lo) / 576.0
    if abs(direct - factored) > 1e-13:
        raise InternalConsistencyError(
            f"discriminant forms disagree at ({p2!r}, {p3!r}): {direct!r} vs {factored!r}")
    return factored, p, q


_BOUNDARY = 1e-13


def _roots_arrays(p2, p3):
    """Vectorized stationary roots (r1, r2, r3, theta); theta is NaN at p2 = 1/4.

    On the curves p3 = f-(p2) and p3 = f+(p2) the closed double-root forms
    replace the cosine formula."""
    p2 = np.clip(np.asarray(p2, dtype=float), 0.25, 1.0)
    p3 = np.asarray(p3, dtype=float)
    w = np.maximum(0.0, 3.0 * (4.0 * p2 - 1.0))
    root_w = np.sqrt(w)
    c = root_w / 6.0
    p = (1.0 - 4.0 * p2) / 16.0
    q = (1.0 - 6.0 * p2 + 8.0 * p3) / 96.0
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = (3.0 * q / (2.0 * p)) * np.sqrt(-3.0 / p)
    theta = np.arccos(np.clip(arg, -1.0, 1.0)) / 3.0

    # sqrt3 (4 p2 - 1)^(3/2) = w^(3/2) / 3
    lo = (3.0 * (6.0 * p2 - 1.0) - w * root_w / 3.0) / 24.0
    hi = (3.0 * (6.0 * p2 - 1.0) + w * root_w / 3.0) / 24.0
    d_lo, d_hi = np.abs(p3 - lo), np.abs(p3 - hi)
    # near p2 = 1/4 both curves are within the band; take the nearer one
    on_lo = (d_lo <= _BOUNDARY) & (d_lo < d_hi)
    on_hi = (d_hi <= _BOUNDARY) & ~on_lo
    theta = np.where(on_lo, 0.0, np.where(on_hi, math.pi / 3.0, theta))

    r1 = 0.75 + c * np.cos(theta)
    r2 = 0.75 + c * np.cos(theta - 2.0 * math.pi / 3.0)
    r3 = 0.75 + c * np.cos(theta + 2.0 * math.pi / 3.0)
    # closed forms on the boundary: ell+ simple / ell- double, L+ double / L- simple
    r1 = np.where(on_lo, (9.0 + 2.0 * root_w) / 12.0, np.where(on_hi, (9.0 + root_w) / 12.0, r1))
    r2 = np.where(on_lo, (9.0 - root_w) / 12.0, np.where(on_hi, (9.0 + root_w) / 12.0, r2))
    r3 = np.where(on_lo, (9.0 - root_w) / 12.0, np.where(on_hi, (9.0 - 2.0 * root_w) / 12.0, r3))

    triple = w == 0.0
    r1, r2, r3 = (np.where(triple, 0.75, r) for r in (r1, r2, r3))
    theta = np.where(triple, np.nan, theta)
    return r1, r2, r3, theta


def stationary_roots(pair, tol: Tolerances = DEFAULT) -> StationaryRoots:
    delta, _, _ = delta_and_pq(pair, tol)
    p2, p3 = _require_A(pair, tol)
    r1, r2, r3, theta = (float(v) for v in _roots_arrays(p2, p3))
    return StationaryRoots(r1, r2, r3, delta, None if math.isnan(theta) else theta)


def _bounds_arrays(p2, p3, smin, smax):
    r1, r2, _, _ = _roots_arrays(p2, p3)
    # r1 / r2 can fall outside [s_min, s_max]; clamping keeps every
    # candidate inside the feasible interval
    cands = np.stack([
        smax,
        np.clip(np.minimum(r1, smax), smin, smax),
        np.clip(np.maximum(smin, r2), smin, smax),
        smin,
    ], axis=-1)
    vals = P_value(cands, (p2[:, None], p3[:, None]))
    i_lo = np.argmin(vals, axis=1)
    i_hi = np.argmax(vals, axis=1)
    rows = np.arange(len(p2))
    min_p, max_p = vals[rows, i_lo], vals[rows, i_hi]
    return min_p, max_p, cands[rows, i_lo], cands[rows, i_hi]


def p4_bounds_many(p2, p3, tol: Tolerances = DEFAULT) -> list[BoundsResult]:
    """:func:`p4_bounds` for many pairs at once."""
    p2 = np.asarray(p2, dtype=float).ravel()
    p3 = np.asarray(p3, dtype=float).ravel()
    ranges = s_range_many(p2, p3, tol)
    q2 = np.clip(p2, 0.25, 1.0)
    smin = np.array([r.s_min for r in ranges])
    smax = np.array([r.s_max for r in ranges])
    min_p, max_p, s_lo, s_hi = _bounds_arrays(q2, p3, smin, smax)
    f_mid = (3.0 * p2 * p2 - 6.0 * p2 + 8.0 * p3 + 1.0) / 6.0
    out = []
    for k, rng in enumerate(ranges):
        out.append(BoundsResult(
            m=float(-max_p[k]), M=float(-min_p[k]),
            F_minus=float(f_mid[k] + 4.0 * min_p[k]), F_mid=float(f_mid[k]),
            F_plus=float(f_mid[k] + 4.0 * max_p[k]),
            s_at_min=float(s_hi[k]), s_at_max=float(s_lo[k]), srange=rng))
    return out


def p4_bounds(pair, tol: Tolerances = DEFAULT) -> BoundsResult:
    """Tight ``[F-, F+]`` for p4 together with det extremes and witnesses."""
    _require_A(pair, tol)
    return p4_bounds_many([pair[0]], [pair[1]], tol)[0]


def classify_from_bounds(p4, bounds: BoundsResult, eps: float = DEFAULT.classify,
                         tol: Tolerances = DEFAULT) -> Class3D:
    """Label ``p4`` against precomputed bounds of an in-region pair."""
    if not bounds.F_minus - tol.p4_feasible <= p4 <= bounds.F_plus + tol.p4_feasible:
        return Class3D.INFEASIBLE
    if p4 > bounds.F_mid + eps:
        return Class3D.ENTANGLED
    return Class3D.SEPARABLE


def classify_triple(p2: float, p3: float, p4: float, eps: float = DEFAULT.classify,
                    tol: Tolerances = DEFAULT) -> Class3D:
    """Separable / Entangled / Infeasible from (p2, p3, p4).

    Points on the dividing surface (within ``eps``) count as separable."""
    if not in_region_A((p2, p3), tol.region):
        return Class3D.INFEASIBLE
    return classify_from_bounds(p4, p4_bounds((p2, p3), tol), eps, tol)


def classify_triple_many(p2, p3, p4, eps: float = DEFAULT.classify,
                         tol: Tolerances = DEFAULT) -> list[Class3D]:
    p2, p3, p4 = (np.asarray(v, dtype=float).ravel() for v in (p2, p3, p4))
    inside = np.array([in_region_A((a, b), tol.region) for a, b in zip(p2, p3)], dtype=bool)
    out = [Class3D.INFEASIBLE] * len(p2)
    idx = np.nonzero(inside)[0]
    if len(idx):
        for k, b in zip(idx, p4_bounds_many(p2[idx], p3[idx], tol)):
            out[k] = classify_from_bounds(p4[k], b, eps, tol)
    return out
