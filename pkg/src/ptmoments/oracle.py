"""Brute-force reference values by enumerating spectra on a grid.

Triples ``x >= y >= z`` are taken from multiples of ``delta``; the fourth
eigenvalue is ``w = 1 - x - y - z`` and a triple is admissible when
``1 >= x``, ``z >= max(0, w)`` and ``w >= -1/2``.  Everything here is slow
on purpose: one x-slice at a time, vectorized over (y, z) only.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResolutionError
from .region2d import in_region_A
from .srange import SRange


@dataclass(frozen=True)
class SimplexGrid:
    delta: float

    def __post_init__(self):
        if not 1e-4 <= self.delta <= 1e-2 + 1e-15:
            raise DomainError(f"grid step must lie in [1e-4, 1e-2], got {self.delta!r}")

    def slices(self):
        """Yield ``(x, y, z, w, mask)`` per grid value of the largest eigenvalue."""
        n = int(round(1.0 / self.delta))
        g = np.arange(n + 1) / n
        for i in range(-(-n // 4), n + 1):
            x = g[i]
            # y >= (1 - x) / 3 since y >= z >= w
            j0 = max(0, int(math.floor((1.0 - x) / 3.0 * n)) - 1)
            y = g[j0:i + 1, None]
            z = g[None, :i + 1]
            w = 1.0 - x - y - z
            mask = (z <= y) & (z >= w) & (w >= -0.5)
            yield x, y, z, w, mask


_COVER = math.sqrt(3.0) / 2.0


def _spectral_distance(x, y, z, w, r2, r3):
    """First-order distance from ``(x, y, z)`` to the fiber of ``(p2, p3)``:
    the minimum-norm step that cancels the moment residual ``(r2, r3)``."""
    a = np.stack([x - w, y - w, z - w])
    b = np.stack([x * x - w * w, y * y - w * w, z * z - w * w])
    saa, sbb, sab = (a * a).sum(0), (b * b).sum(0), (a * b).sum(0)
    det = 36.0 * (saa * sbb - sab * sab)
    num = 9.0 * sbb * r2 * r2 - 12.0 * sab * r2 * r3 + 4.0 * saa * r3 * r3
    with np.errstate(divide="ignore", invalid="ignore"):
        d2 = np.where(det > 0.0, num / det, np.inf)
    exact = (np.abs(r2) <= 1e-12) & (np.abs(r3) <= 1e-12)
    return np.where(exact, 0.0, np.sqrt(np.maximum(d2, 0.0)))


def _within_taylor_bound(x, y, z, w, r2, r3, rho):
    """Necessary condition for a fiber point within ``rho``: each residual is
    at most gradient norm times ``rho`` plus the curvature term.  Unlike the
    first-order distance it stays valid where the Jacobian degenerates."""
    a = np.sqrt((x - w) ** 2 + (y - w) ** 2 + (z - w) ** 2)
    b = np.sqrt((x * x - w * w) ** 2 + (y * y - w * w) ** 2 + (z * z - w * w) ** 2)
    top = np.maximum(np.abs(x), np.abs(w)) + rho
    ok2 = np.abs(r2) <= 2.0 * a * rho + 4.0 * rho * rho
    ok3 = np.abs(r3) <= 3.0 * b * rho + 12.0 * top * rho * rho
    return ok2 & ok3


def _matching(grid: SimplexGrid, pair, band: float):
    """Grid triples with moment residuals within ``band`` whose first-order
    distance to the exact fiber is at most the covering radius of the grid
    (every fiber point has a grid triple that close)."""
    p2, p3 = pair
    for x, y, z, w, mask in grid.slices():
        hit = mask & (np.abs(x * x + y * y + z * z + w * w - p2) <= band)
        j, l = np.nonzero(hit)
        if len(j) == 0:
            continue
        yy, zz = y[j, 0], z[0, l]
        ww = 1.0 - x - yy - zz
        xx = np.full_like(yy, x)
        r2 = xx * xx + yy * yy + zz * zz + ww * ww - p2
        r3 = xx * xx * xx + yy * yy * yy + zz * zz * zz + ww * ww * ww - p3
        rho = _COVER * grid.delta
        keep = ((np.abs(r3) <= band) & (_spectral_distance(xx, yy, zz, ww, r2, r3) <= rho)
                & _within_taylor_bound(xx, yy, zz, ww, r2, r3, rho))
        if keep.any():
            yield x, yy[keep], zz[keep], ww[keep]


def _check(pair, delta, band):
    if not in_region_A(pair):
        raise DomainError(f"pair ({pair[0]!r}, {pair[1]!r}) is outside region A")
    SimplexGrid(delta)
    return 3.0 * delta if band is None else band


def _project(x, y, z, p2, p3, steps=3):
    """Minimum-norm Newton steps from grid triples onto the fiber; triples
    that leave the admissible set are dropped."""
    t = np.stack([np.full_like(y, x), y, z])
    for _ in range(steps):
        w = 1.0 - t.sum(0)
        r2 = (t * t).sum(0) + w * w - p2
        r3 = (t ** 3).sum(0) + w ** 3 - p3
        a, b = 2.0 * (t - w), 3.0 * (t * t - w * w)
        saa, sbb, sab = (a * a).sum(0), (b * b).sum(0), (a * b).sum(0)
        det = saa * sbb - sab * sab
        safe = np.where(det > 0.0, det, 1.0)
        c2 = np.where(det > 0.0, (sbb * r2 - sab * r3) / safe, 0.0)
        c3 = np.where(det > 0.0, (saa * r3 - sab * r2) / safe, 0.0)
        t = t - (c2 * a + c3 * b)
    x, y, z = t
    w = 1.0 - t.sum(0)
    tol = 1e-12
    ok = (x <= 1.0 + tol) & (x >= y - tol) & (y >= z - tol) & (z >= w - tol) & (w >= -0.5 - tol)
    return x[ok], y[ok], z[ok], w[ok]


@functools.lru_cache(maxsize=64)
def _fiber_extremes(p2: float, p3: float, delta: float, band: float, refine: bool = False):
    # one pass gives both s and det extremes: (s_lo, s_hi, d_lo, d_hi)
    grid = SimplexGrid(delta)
    s_lo = d_lo = math.inf
    s_hi = d_hi = -math.inf
    for x, y, z, w in _matching(grid, (p2, p3), band):
        if refine:
            x, y, z, w = _project(x, y, z, p2, p3)
            if len(x) == 0:
                continue
        s = x + y + z
        d = x * y * z * w
        s_lo, s_hi = min(s_lo, float(s.min())), max(s_hi, float(s.max()))
        d_lo, d_hi = min(d_lo, float(d.min())), max(d_hi, float(d.max()))
    if s_lo > s_hi:
        raise ResolutionError(f"no grid triple matches ({p2!r}, {p3!r}); resolution too coarse")
    return s_lo, s_hi, d_lo, d_hi


def oracle_s_range(pair, delta: float = 1e-3, band: float | None = None, refine: bool = False) -> SRange:
    """Grid min/max of ``x + y + z`` over triples matching ``pair`` within ``band``
    (default ``3 delta``).  With ``refine`` each match is first pushed onto
    the fiber, which removes the grid rounding of order ``delta``."""
    band = _check(pair, delta, band)
    lo, hi, _, _ = _fiber_extremes(float(pair[0]), float(pair[1]), float(delta), float(band), bool(refine))
    return SRange(lo, hi)


def oracle_det_extremes(pair, delta: float = 1e-3, band: float | None = None,
                        refine: bool = False) -> tuple[float, float]:
    """Grid min/max of ``x y z w`` over triples matching ``pair``."""
    band = _check(pair, delta, band)
    _, _, lo, hi = _fiber_extremes(float(pair[0]), float(pair[1]), float(delta), float(band), bool(refine))
    return lo, hi


@dataclass(frozen=True)
class GlobalExtremes:
    det_min: float
    at_min: tuple[float, float, float]
    det_max: float
    at_max: tuple[float, float, float]


def oracle_global_det(delta: float = 1e-3) -> GlobalExtremes:
    """Determinant extremes over every admissible spectrum, with the
    attaining ``(x, y, z)``."""
    grid = SimplexGrid(delta)
    best_lo = (math.inf, None)
    best_hi = (-math.inf, None)
    for x, y, z, w, mask in grid.slices():
        d = np.where(mask, x * y * z * w, np.nan)
        if not mask.any():
            continue
        k = np.nanargmin(d)
        if d.flat[k] < best_lo[0]:
            j, l = np.unravel_index(k, d.shape)
            best_lo = (float(d.flat[k]), (float(x), float(y[j, 0]), float(z[0, l])))
        k = np.nanargmax(d)
        if d.flat[k] > best_hi[0]:
            j, l = np.unravel_index(k, d.shape)
            best_hi = (float(d.flat[k]), (float(x), float(y[j, 0]), float(z[0, l])))
    return GlobalExtremes(best_lo[0], best_lo[1], best_hi[0], best_hi[1])


def random_spectra(n: int, seed: int) -> np.ndarray:
    """``n`` admissible spectra (rows, descending) by rejection from the unit cube."""
    rng = np.random.default_rng(seed)
    out = []
    have = 0
    while have < n:
        xyz = -np.sort(-rng.uniform(0.0, 1.0, size=(max(64, 4 * (n - have)), 3)), axis=1)
        w = 1.0 - xyz.sum(axis=1)
        ok = (xyz[:, 2] >= w) & (w >= -0.5)
        good = np.column_stack([xyz[ok], w[ok]])
        out.append(good)
        have += len(good)
    return np.concatenate(out)[:n] if n else np.zeros((0, 4))


def oracle_region_cloud(n: int, seed: int) -> list[tuple[float, float, float]]:
    """``(p2, p3, p4)`` of ``n`` random admissible spectra whose ``(p2, p3)``
    lies in A (the simplex constraints alone admit e.g. ``p2 > 1``)."""
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n!r}")
    out = []
    draw = 0
    while len(out) < n:
        spec = random_spectra(4 * (n - len(out)), [seed, draw])
        draw += 1
        for row in spec:
            p2, p3, p4 = (float((row ** k).sum()) for k in (2, 3, 4))
            if in_region_A((p2, p3), band=0.0) and len(out) < n:
                out.append((p2, p3, p4))
    return out
