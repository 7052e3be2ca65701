import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptmoments.errors import DomainError, InconsistentMomentsError, InternalConsistencyError, ValidationError
from ptmoments.moments import (PTMomentVector, Spectrum, bell_diagonal_moments, concurrence_interval,
                               det_from_moments, elementary_symmetric, negativity, pt_moments, reconstruct_spectrum,
                               trace_powers, werner_moments)
from ptmoments.qstate import SINGLET, make_bell_diagonal, make_werner, partial_transpose, sample_random_state

MIXED = (1, 0.25, 1 / 16, 1 / 64)
PURE = (1, 1, 1, 1)
SINGLET_P = (1, 1, 0.25, 0.25)


def test_state_moments():
    assert pt_moments(partial_transpose(np.eye(4) / 4)).as_tuple() == pytest.approx(MIXED)
    pure = np.zeros((4, 4))
    pure[0, 0] = 1
    assert pt_moments(partial_transpose(pure)).as_tuple() == pytest.approx(PURE)
    singlet = np.outer(SINGLET, SINGLET.conj())
    assert pt_moments(partial_transpose(singlet)).as_tuple() == pytest.approx(SINGLET_P)


def test_frozen_sample_moments():
    p = pt_moments(partial_transpose(sample_random_state(7, 0)))
    assert p.as_tuple() == pytest.approx(
        (1.0, 0.48612182031950657, 0.26516971646626236, 0.15791983122890207), abs=1e-12)


def test_werner_moments():
    assert werner_moments(0).as_tuple() == pytest.approx(MIXED)
    assert werner_moments(1).as_tuple() == pytest.approx(SINGLET_P)
    assert werner_moments(1 / 3).as_tuple() == pytest.approx((1, 1 / 3, 1 / 9, 1 / 27))
    with pytest.raises(DomainError):
        werner_moments(-0.1)


@given(st.floats(0, 1))
def test_werner_closed_form_matches_state(w):
    direct = pt_moments(partial_transpose(make_werner(w))).as_tuple()
    assert werner_moments(w).as_tuple() == pytest.approx(direct, abs=1e-12)


def test_bell_moments():
    assert bell_diagonal_moments((0, 0, 0)).as_tuple() == pytest.approx(MIXED)
    assert bell_diagonal_moments((-1, -1, -1)).as_tuple() == pytest.approx(SINGLET_P)
    p = bell_diagonal_moments((0.5, 0, 0))
    assert (p.p2, p.p3) == pytest.approx((5 / 16, 7 / 64))
    direct = pt_moments(partial_transpose(make_bell_diagonal((0.5, 0, 0))))
    assert p.as_tuple() == pytest.approx(direct.as_tuple(), abs=1e-12)


def test_elementary_symmetric():
    assert elementary_symmetric(PTMomentVector(*MIXED)).as_tuple() == pytest.approx((1, 3 / 8, 1 / 16, 1 / 256))
    assert elementary_symmetric(PTMomentVector(*PURE)).as_tuple() == pytest.approx((1, 0, 0, 0))
    assert elementary_symmetric(PTMomentVector(*SINGLET_P)).as_tuple() == pytest.approx((1, 0, -0.25, -1 / 16))


def test_determinant():
    assert det_from_moments(PTMomentVector(*MIXED)) == pytest.approx(1 / 256)
    assert det_from_moments(PTMomentVector(*SINGLET_P)) == pytest.approx(-1 / 16)
    assert det_from_moments(PTMomentVector(*PURE)) == pytest.approx(0, abs=1e-15)


def test_reconstruction_examples():
    assert reconstruct_spectrum(PTMomentVector(*MIXED)).as_tuple() == pytest.approx((0.25,) * 4, abs=1e-9)
    assert reconstruct_spectrum(PTMomentVector(*PURE)).as_tuple() == pytest.approx((1, 0, 0, 0), abs=1e-9)
    assert reconstruct_spectrum(PTMomentVector(*SINGLET_P)).as_tuple() == pytest.approx(
        (0.5, 0.5, 0.5, -0.5), abs=1e-9)


def test_reconstruction_rejects_impossible_moments():
    with pytest.raises(InconsistentMomentsError):
        reconstruct_spectrum(PTMomentVector(1, 0.5, 0.25, 0.2))


def test_moment_vector_validation():
    with pytest.raises(ValidationError):
        PTMomentVector(0.9, 0.3, 0.1, 0.05)
    assert PTMomentVector.from_json({"p": list(MIXED)}) == PTMomentVector(*MIXED)
    with pytest.raises(ValidationError):
        PTMomentVector.from_json({"q": 1})


def test_trace_powers_flags_non_hermitian():
    m = np.eye(4, dtype=complex) / 4
    m[0, 0] += 0.1j
    with pytest.raises(InternalConsistencyError):
        trace_powers(m)


def test_negativity():
    assert negativity(Spectrum(0.25, 0.25, 0.25, 0.25)) == 0
    assert negativity(Spectrum(0.5, 0.5, 0.5, -0.5)) == 1
    w = 2 / 3
    spec = reconstruct_spectrum(werner_moments(w))
    assert negativity(spec) == pytest.approx(max(0.0, (3 * w - 1) / 2), abs=1e-9)


def test_concurrence_interval():
    assert concurrence_interval(0) == (0, 0)
    assert concurrence_interval(1) == pytest.approx((1, 1), abs=1e-12)
    lo, hi = concurrence_interval(0.5)
    assert lo == 0.5 and hi == pytest.approx((math.sqrt(6) - 1) / 2, abs=1e-11)
    with pytest.raises(DomainError):
        concurrence_interval(1.5)


@given(st.integers(0, 10**6))
def test_reconstruction_round_trip(index):
    gamma = partial_transpose(sample_random_state(11, index))
    p = pt_moments(gamma)
    spec = reconstruct_spectrum(p)
    assert spec.as_tuple() == pytest.approx(np.linalg.eigvalsh(gamma.matrix)[::-1], abs=1e-8)
    assert elementary_symmetric(p).e4 == pytest.approx(det_from_moments(p), abs=1e-12)
    assert math.prod(spec) == pytest.approx(det_from_moments(p), abs=1e-10)


@given(st.floats(0, 1))
def test_reconstruction_handles_clustered_spectra(w):
    # Werner spectra carry a triple eigenvalue
    p = werner_moments(w)
    spec = reconstruct_spectrum(p)
    for k, target in enumerate(p.as_tuple(), start=1):
        assert sum(x ** k for x in spec) == pytest.approx(target, abs=1e-8)
    assert min(spec) == pytest.approx(min((1 - 3 * w) / 4, (1 + w) / 4), abs=1e-5)
