import math

import numpy as np
import pytest

from ptmoments.bounds3d import Class3D, classify_triple, p4_bounds_many
from ptmoments.errors import DomainError, ResolutionError
from ptmoments.oracle import (SimplexGrid, oracle_det_extremes, oracle_global_det, oracle_region_cloud,
                              oracle_s_range, random_spectra)
from ptmoments.region2d import f_bounds, in_region_A


@pytest.mark.parametrize("pair, expected", [
    ((0.5, 0.25), (1.0, 1.1036)),
    ((0.25, 1 / 16), (0.75, 0.75)),
    ((1.0, 0.25), (1.5, 1.5)),
])
def test_s_range_examples(pair, expected):
    r = oracle_s_range(pair, 1e-3)
    assert (r.s_min, r.s_max) == pytest.approx(expected, abs=0.01)


@pytest.mark.parametrize("pair, expected", [
    ((0.5, 0.25), (-1 / 256, 0.0)),
    ((0.25, 1 / 16), (1 / 256, 1 / 256)),
])
def test_det_examples(pair, expected):
    assert oracle_det_extremes(pair, 1e-3) == pytest.approx(expected, abs=1e-3)


def test_coarse_global_sweep():
    g = oracle_global_det(1e-2)
    assert g.det_min == pytest.approx(-1 / 16, abs=1e-3)
    assert g.det_max == pytest.approx(1 / 256, abs=1e-3)
    assert g.at_min == pytest.approx((0.5, 0.5, 0.5), abs=0.02)
    assert g.at_max == pytest.approx((0.25, 0.25, 0.25), abs=0.02)


def test_agrees_with_analytic_bounds():
    delta = 1e-2
    rng = np.random.default_rng(50)
    p2 = rng.uniform(0.25, 1, 50)
    lo, hi = np.array([f_bounds(x) for x in p2]).T
    p3 = lo + (hi - lo) * rng.uniform(size=50)
    for a, b, r in zip(p2, p3, p4_bounds_many(p2, p3)):
        o = oracle_s_range((a, b), delta)
        assert abs(o.s_min - r.srange.s_min) <= 10 * delta and abs(o.s_max - r.srange.s_max) <= 10 * delta
        m, M = oracle_det_extremes((a, b), delta)
        assert abs(m - r.m) <= 10 * delta and abs(M - r.M) <= 10 * delta


def test_region_cloud():
    cloud = oracle_region_cloud(1000, seed=5)
    assert cloud == oracle_region_cloud(1000, seed=5)
    assert len(cloud) == 1000
    for p2, p3, p4 in cloud:
        assert in_region_A((p2, p3))
        assert classify_triple(p2, p3, p4) is not Class3D.INFEASIBLE
    assert oracle_region_cloud(0, seed=5) == []


def test_random_spectra_are_admissible():
    spec = random_spectra(500, 9)
    x, y, z, w = spec.T
    assert np.all((x <= 1) & (x >= y) & (y >= z) & (z >= w) & (w >= -0.5))
    assert np.allclose(spec.sum(axis=1), 1)


def test_grid_validation():
    with pytest.raises(DomainError):
        SimplexGrid(0.1)
    with pytest.raises(DomainError):
        SimplexGrid(1e-5)
    with pytest.raises(DomainError):
        oracle_s_range((0.25, 0.07), 1e-2)


def test_grid_points_are_admissible():
    for x, y, z, w, mask in SimplexGrid(1e-2).slices():
        yy, zz = np.broadcast_arrays(y, z)
        ww = np.broadcast_to(w, yy.shape)
        assert np.all((x >= yy[mask]) & (yy[mask] >= zz[mask]) & (zz[mask] >= ww[mask]) & (ww[mask] >= -0.5))
        assert math.isclose(float(x), round(float(x) * 100) / 100)


def test_resolution_error_when_nothing_matches():
    # a band far below the grid spacing leaves no match off the lattice
    with pytest.raises(ResolutionError, match="resolution too coarse"):
        oracle_s_range((0.6123456, 0.3012345), 1e-2, band=1e-12)
