import time

import numpy as np
import pytest
from hypothesis import settings

from ptmoments.bounds3d import Class3D, classify_from_bounds, p4_bounds_many
from ptmoments.moments import pt_moments
from ptmoments.qstate import partial_transpose, sample_random_state
from ptmoments.region2d import in_region_A

settings.register_profile("ptmom", deadline=None, max_examples=60)
settings.load_profile("ptmom")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


class Sample:
    """Hilbert-Schmidt states with their moments, PT spectra and 3-moment labels."""

    def __init__(self, n, seed):
        t0 = time.perf_counter()
        gammas = np.empty((n, 4, 4), dtype=complex)
        moments = np.empty((n, 4))
        for i in range(n):
            g = partial_transpose(sample_random_state(seed, i))
            gammas[i] = g.matrix
            moments[i] = pt_moments(g).as_tuple()
        self.moments = moments
        self.lam_min = np.linalg.eigvalsh(gammas)[:, 0]
        self.sample_seconds = time.perf_counter() - t0
        t0 = time.perf_counter()
        p2, p3, p4 = moments[:, 1], moments[:, 2], moments[:, 3]
        self.inside = np.array([in_region_A((a, b), 1e-9) for a, b in zip(p2, p3)])
        idx = np.nonzero(self.inside)[0]
        self.bounds = [None] * n
        self.labels = [Class3D.INFEASIBLE] * n
        for k, b in zip(idx, p4_bounds_many(p2[idx], p3[idx])):
            self.bounds[k] = b
            self.labels[k] = classify_from_bounds(p4[k], b)
        self.classify_seconds = time.perf_counter() - t0


@pytest.fixture(scope="session")
def hs_sample():
    return Sample(100_000, seed=2024)
