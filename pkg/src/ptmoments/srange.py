"""Admissible range of ``s``, the sum of the three largest eigenvalues of
rho^Gamma, for a fixed pair (p2, p3).

For fixed ``s`` the fourth eigenvalue is ``1 - s`` and the other three are
the roots of a cubic whose power sums are ``s``, ``p2 - (1-s)^2`` and
``p3 - (1-s)^3``.  ``s`` is feasible when that cubic has three real roots in
``[max(0, 1-s), 1]``.  :func:`s_range` scans a uniform grid of ``s`` and
bisects every feasibility transition.

Extremes of ``s`` are attained only where two eigenvalues coincide or one
vanishes; :func:`critical_s_values` enumerates those spectra directly.  The
scan snaps to them when close and falls back on them when the feasible set
is thinner than a grid cell (pairs on the boundary of region A, where the
spectrum is unique).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DomainError, InternalConsistencyError
from .polyroots import cubic_discriminant, cubic_real_parts, solve_cubic
from .region2d import in_region_A

S_LO = 0.75
S_HI = 1.5
_SNAP = 1e-5


@dataclass(frozen=True)
class SRange:
    s_min: float
    s_max: float
    # number of disjoint feasible runs seen by the grid scan (1 expected)
    components: int = 1

    def __iter__(self):
        return iter((self.s_min, self.s_max))


def _cubic_coeffs(s, p2, p3):
    w = 1.0 - s
    pi2 = p2 - w * w
    pi3 = p3 - w * w * w
    e2 = (s * s - pi2) / 2.0
    e3 = (pi3 - s * pi2 + e2 * s) / 3.0
    # t^3 - e1 t^2 + e2 t - e3
    return -s, e2, -e3


def _real_rooted(a2, a1, a0, band):
    """Delta_c <= band * scale: three real roots up to rounding.

    The band is relative to the cubic's own magnitude (Delta_c is degree 6
    in the root spread), so exact triple roots that rounding nudges to the
    one-real side still pass."""
    h = a2 / 3.0
    p3 = (a1 - a2 * h) / 3.0
    q2 = (h * h * h - 0.5 * h * a1 + 0.5 * a0)
    cube = p3 * p3 * p3
    sq = q2 * q2
    delta = sq + cube
    scale = np.maximum(np.abs(cube), sq)
    return delta <= band * scale


def feasible_s(s: float, pair, tol: Tolerances = DEFAULT) -> bool:
    """Whether some spectrum with moments ``pair`` has top-three sum ``s``."""
    if not S_LO <= s <= S_HI:
        return False
    p2, p3 = pair
    a2, a1, a0 = _cubic_coeffs(s, p2, p3)
    if not _real_rooted(a2, a1, a0, tol.s_disc):
        return False
    x, _, z = solve_cubic(a2, a1, a0).real_parts()
    return x <= 1.0 + tol.s_root and z >= max(0.0, 1.0 - s) - tol.s_root


def feasible_s_array(s, p2, p3, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Vectorized :func:`feasible_s`; arguments broadcast.

    Root bounds are checked without computing roots: a real-rooted cubic
    has every root >= L iff the elementary symmetric functions of
    ``root - L`` are all >= 0 (likewise for ``U - root``)."""
    s, p2, p3 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (s, p2, p3)))
    a2, a1, a0 = _cubic_coeffs(s, p2, p3)
    e1, e2, e3 = -a2, a1, -a0
    lo = np.maximum(0.0, 1.0 - s) - tol.s_root
    hi = 1.0 + tol.s_root
    above = ((e1 - 3.0 * lo >= 0.0)
             & (e2 - lo * (2.0 * e1 - 3.0 * lo) >= 0.0)
             & (e3 - lo * (e2 - lo * (e1 - lo)) >= 0.0))
    below = ((3.0 * hi - e1 >= 0.0)
             & (hi * (3.0 * hi - 2.0 * e1) + e2 >= 0.0)
             & (hi * (hi * (hi - e1) + e2) - e3 >= 0.0))
    return (s >= S_LO) & (s <= S_HI) & _real_rooted(a2, a1, a0, tol.s_disc) & above & below


def _critical_arrays(p2, p3, tol: float = 1e-9):
    """Candidate ``s`` values (n x 6 array, NaN where invalid)."""
    p2 = np.atleast_1d(np.asarray(p2, dtype=float))
    p3 = np.atleast_1d(np.asarray(p3, dtype=float))
    cands = []

    # spectra {a, b, b, c}: b solves b^3 - 3/4 b^2 + (1-p2)/4 b + (3p2-1-2p3)/24 = 0
    roots_b = cubic_real_parts(-0.75, (1.0 - p2) / 4.0, (3.0 * p2 - 1.0 - 2.0 * p3) / 24.0)
    for b in roots_b:
        u = 1.0 - 2.0 * b
        v = (u * u - p2 + 2.0 * b * b) / 2.0
        disc = u * u - 4.0 * v
        root = np.sqrt(np.maximum(disc, 0.0))
        a, c = (u + root) / 2.0, (u - root) / 2.0
        spec = np.sort(np.stack([a, b, b, c], axis=-1), axis=-1)[..., ::-1]
        cands.append(_spectrum_s(spec, disc >= -tol, p2, p3, tol))

    # spectra {a, b, c, 0}
    e2 = (1.0 - p2) / 2.0
    e3 = (1.0 - 3.0 * p2 + 2.0 * p3) / 6.0
    disc = cubic_discriminant(-1.0, e2, -e3)
    a, b, c = cubic_real_parts(-1.0, e2, -e3)
    spec = np.sort(np.stack([a, b, c, np.zeros_like(a)], axis=-1), axis=-1)[..., ::-1]
    cands.append(_spectrum_s(spec, disc >= -DEFAULT.s_disc, p2, p3, tol))
    return np.stack(cands, axis=-1)


def _spectrum_s(spec, ok, p2, p3, tol):
    ok = (ok & (spec[..., 0] <= 1.0 + tol) & (spec[..., 3] >= -0.5 - tol) & (spec[..., 2] >= -tol)
          & (np.abs((spec ** 2).sum(-1) - p2) <= 1e-8) & (np.abs((spec ** 3).sum(-1) - p3) <= 1e-8))
    s = spec[..., :3].sum(-1)
    return np.where(ok, s, np.nan)


def critical_s_values(pair) -> list[float]:
    """Sums of the top three eigenvalues over all valid spectra with moments
    ``pair`` that have a repeated or a zero eigenvalue (sorted, deduplicated)."""
    vals = _critical_arrays(pair[0], pair[1])[0]
    out: list[float] = []
    for v in sorted(v for v in vals if not math.isnan(v)):
        if not out or v - out[-1] > 1e-12:
            out.append(float(v))
    return out


def _grid(n: int) -> np.ndarray:
    return np.linspace(S_LO, S_HI, n)


def _bisect(lo, hi, lo_ok, p2, p3, tol: Tolerances):
    """Vectorized bisection on ``[lo, hi]`` where feasibility differs at the ends.

    Returns the feasible-side end after convergence."""
    lo = lo.copy()
    hi = hi.copy()
    while np.max(hi - lo) > tol.s_bisect:
        mid = 0.5 * (lo + hi)
        ok = feasible_s_array(mid, p2, p3, tol)
        same = ok == lo_ok
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return np.where(lo_ok, lo, hi)


def _snap(values, cands):
    """Replace each value by the nearest valid candidate within ``_SNAP``."""
    out = values.copy()
    dist = np.abs(cands - values[:, None])
    dist = np.where(np.isnan(dist), np.inf, dist)
    j = np.argmin(dist, axis=1)
    near = dist[np.arange(len(values)), j] <= _SNAP
    out[near] = cands[np.arange(len(values)), j][near]
    return out


def s_range_many(p2, p3, tol: Tolerances = DEFAULT, chunk: int = 256) -> list[SRange]:
    """:func:`s_range` for many pairs at once (vectorized scan and bisection)."""
    p2 = np.asarray(p2, dtype=float).ravel()
    p3 = np.asarray(p3, dtype=float).ravel()
    for a, b in zip(p2, p3):
        if not in_region_A((a, b), tol.region):
            raise DomainError(f"pair ({a!r}, {b!r}) is outside region A")
    n = len(p2)
    grid = _grid(tol.s_grid)
    step = grid[1] - grid[0]
    smin = np.full(n, np.nan)
    smax = np.full(n, np.nan)
    comps = np.zeros(n, dtype=int)

    for start in range(0, n, chunk):
        sl = slice(start, min(n, start + chunk))
        q2, q3 = p2[sl, None], p3[sl, None]
        feas = feasible_s_array(grid[None, :], q2, q3, tol)
        rows, cols = np.nonzero(feas[:, 1:] != feas[:, :-1])
        ends = np.full(len(rows), np.nan)
        if len(rows):
            lo_ok = feas[rows, cols]
            ends = _bisect(grid[cols], grid[cols] + step, lo_ok, p2[sl][rows], p3[sl][rows], tol)
        for k in range(sl.stop - sl.start):
            idx = np.nonzero(feas[k])[0]
            if len(idx) == 0:
                continue
            comps[start + k] = 1 + int(np.count_nonzero(np.diff(idx) > 1))
            own = ends[rows == k]
            lo_v = [grid[idx[0]]] + [e for e in own if e < grid[idx[0]]]
            hi_v = [grid[idx[-1]]] + [e for e in own if e > grid[idx[-1]]]
            smin[start + k] = min(lo_v)
            smax[start + k] = max(hi_v)

    cands = _critical_arrays(p2, p3)
    found = ~np.isnan(smin)
    if found.any():
        smin[found] = _snap(smin[found], cands[found])
        smax[found] = _snap(smax[found], cands[found])
    missing = np.nonzero(~found)[0]
    for k in missing:
        valid = cands[k][~np.isnan(cands[k])]
        if len(valid) == 0:
            raise InternalConsistencyError(
                f"no feasible s for pair ({p2[k]!r}, {p3[k]!r}) although it lies in region A")
        smin[k], smax[k] = valid.min(), valid.max()
        comps[k] = 1
    return [SRange(float(a), float(b), int(c)) for a, b, c in zip(smin, smax, comps)]


def s_range(pair, tol: Tolerances = DEFAULT) -> SRange:
    """``[s_min, s_max]`` for a pair in region A."""
    return s_range_many([pair[0]], [pair[1]], tol)[0]
